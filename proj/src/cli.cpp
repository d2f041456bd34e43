#include "reebsplit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "reebsplit/acceptance.hpp"
#include "reebsplit/error.hpp"
#include "reebsplit/field.hpp"
#include "reebsplit/gen.hpp"
#include "reebsplit/io.hpp"
#include "reebsplit/reeb.hpp"
#include "reebsplit/split.hpp"

namespace reebsplit {

namespace fs = std::filesystem;

namespace {

constexpr int kExitVerification = 2;

struct Config {
  std::string input;
  std::string out;
  std::string dot;
  std::string group;
  std::string kind;
  std::uint64_t seed = 1;
  int size = -1;
  int symmetry = 1;
  int edge = -1;
  std::optional<double> cut_value;
  bool all_edges = false;
  bool json = false;
  bool timing = false;
};

void emit(const Config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
  } else {
    write_text_file(cfg.out, text);
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

MeshWithField load_mesh(const Config& cfg) {
  if (cfg.input.empty()) throw Error(ErrorCode::Parse, "--input is required");
  return read_mesh_file(cfg.input);
}

int cmd_validate(const Config& cfg, std::ostream& out, std::ostream& err) {
  const MeshWithField m = load_mesh(cfg);
  const SurfaceReport s = validate_surface(m.mesh);
  const FieldClassReport cls = classify_field(m.mesh, m.field);
  if (cfg.json) {
    Json doc;
    doc["schema"] = kSchema;
    doc["surface"] = {{"vertices", s.vertices},     {"edges", s.edges},
                      {"triangles", s.triangles},   {"closed", s.closed},
                      {"orientable", s.orientable}, {"genus", s.genus},
                      {"boundaries", s.boundary_count}, {"euler", s.euler}};
    Json field;
    field["class"] = to_string(cls.cls);
    if (cls.valid()) {
      field["minima"] = cls.minima;
      field["maxima"] = cls.maxima;
      field["saddles"] = cls.saddles;
      field["multiplicity_sum"] = cls.saddle_multiplicity_sum;
      field["euler_sum"] = cls.euler_sum();
    } else {
      field["problem"] = to_string(*cls.problem);
      field["detail"] = cls.detail;
    }
    doc["field"] = field;
    emit(cfg, out, dump(doc));
  } else {
    std::ostringstream text;
    text << "vertices: " << s.vertices << ", edges: " << s.edges << ", triangles: " << s.triangles << "\n";
    text << "closed: " << (s.closed ? "yes" : "no") << ", genus: " << s.genus << ", boundaries: " << s.boundary_count
         << ", euler: " << s.euler << "\n";
    if (cls.valid()) {
      text << "field: " << to_string(cls.cls) << " (min " << cls.minima << ", max " << cls.maxima << ", saddles "
           << cls.saddles << ", multiplicity sum " << cls.saddle_multiplicity_sum << ")\n";
    }
    emit(cfg, out, text.str());
  }
  if (!cls.valid()) {
    err << to_string(*cls.problem) << ": " << cls.detail << "\n";
    return exit_code_for(*cls.problem);
  }
  return 0;
}

int cmd_reeb(const Config& cfg, std::ostream& out) {
  const MeshWithField m = load_mesh(cfg);
  const ReebGraph graph = build_reeb(m.mesh, m.field);
  if (!cfg.dot.empty()) {
    if (cfg.dot == "-") {
      out << export_dot(graph);
    } else {
      write_text_file(cfg.dot, export_dot(graph));
    }
  }
  if (cfg.json) {
    emit(cfg, out, dump(reeb_to_json(graph)));
  } else if (cfg.dot != "-") {
    std::ostringstream text;
    text << "reeb: " << graph.vertices.size() << " vertices, " << graph.edges.size() << " edges\n";
    for (const ReebVertex& v : graph.vertices) {
      text << "  v" << v.id << " " << to_string(v.kind);
      if (v.kind == ReebVertexKind::Saddle) text << " x" << v.multiplicity;
      text << " at " << format_number(v.label) << "\n";
    }
    for (const ReebEdge& e : graph.edges) text << "  e" << e.id << ": v" << e.lower << " -> v" << e.upper << "\n";
    emit(cfg, out, text.str());
  }
  return 0;
}

LabeledTree load_tree(const Config& cfg) {
  if (cfg.input.empty()) throw Error(ErrorCode::Parse, "--input is required");
  if (fs::path(cfg.input).extension() != ".off") {
    const Json doc = read_json_file(cfg.input);
    if (is_tree_json(doc)) return tree_from_json(doc);
    const MeshWithField m = mesh_from_json(doc);
    return reeb_tree(build_reeb(m.mesh, m.field));
  }
  const MeshWithField m = load_mesh(cfg);
  return reeb_tree(build_reeb(m.mesh, m.field));
}

int cmd_aut(const Config& cfg, std::ostream& out) {
  const LabeledTree tree = load_tree(cfg);
  const AutGroup group = enumerate_aut(tree);
  if (cfg.json) {
    emit(cfg, out, dump(group_to_json(group)));
    return 0;
  }
  std::ostringstream text;
  text << "order: " << group.order() << "\n";
  text << "histogram:";
  for (const auto& [order, count] : element_order_histogram(group)) text << " " << order << ":" << count;
  text << "\nelements:\n";
  for (const Permutation& p : group.elements) {
    text << " ";
    for (int x : p) text << " " << x;
    text << "\n";
  }
  emit(cfg, out, text.str());
  return 0;
}

int cmd_split(const Config& cfg, std::ostream& out) {
  const MeshWithField m = load_mesh(cfg);
  std::optional<AutGroup> group;
  if (!cfg.group.empty()) group = group_from_json(read_json_file(cfg.group));
  auto strip = [&](SplitReport& r) {
    if (!cfg.timing) r.seconds.reset();
  };
  if (cfg.all_edges) {
    AllEdgesReport all = verify_all_fixed_edges(m.mesh, m.field, group);
    for (SplitReport& r : all.reports) strip(r);
    if (all.hypothesis_failure) strip(*all.hypothesis_failure);
    if (cfg.json) {
      emit(cfg, out, dump(all_edges_to_json(all)));
    } else {
      std::string text;
      for (const SplitReport& r : all.reports) text += format_split_report(r);
      if (all.hypothesis_failure) text += format_split_report(*all.hypothesis_failure);
      emit(cfg, out, text);
    }
    return all.passed() ? 0 : kExitVerification;
  }
  SplitOptions options;
  options.group = std::move(group);
  if (cfg.edge >= 0) options.edge = cfg.edge;
  options.cut_value = cfg.cut_value;
  SplitReport report = verify_theorem(m.mesh, m.field, options);
  strip(report);
  emit(cfg, out, cfg.json ? dump(split_report_to_json(report)) : format_split_report(report));
  return report.outcome == SplitOutcome::Failed ? kExitVerification : 0;
}

MeshWithField corpus_item(std::uint64_t seed, int index, Json& entry) {
  const std::uint64_t item_seed = seed * 1000003ULL + static_cast<std::uint64_t>(index);
  entry["seed"] = item_seed;
  if (index % 4 == 3) {
    entry["kind"] = "random-field";
    entry["levels"] = 1;
    MeshWithField m = subdivided_sphere(1);
    m.field = random_field(m.mesh, item_seed);
    return m;
  }
  const int n = 4 + index % 13;
  const int symmetry = 1 + index % 4;
  entry["kind"] = "tree";
  entry["n"] = n;
  entry["symmetry"] = symmetry;
  return realize_tree(random_realizable_tree(n, symmetry, item_seed));
}

int cmd_gen(const Config& cfg, std::ostream& out) {
  const std::string& kind = cfg.kind;
  auto write_mesh = [&](const MeshWithField& m) {
    emit(cfg, out, dump(mesh_to_json(m)));
    return 0;
  };
  if (kind == "octahedron") return write_mesh(octahedron_height());
  if (kind == "sphere") return write_mesh(subdivided_sphere(cfg.size < 0 ? 1 : cfg.size));
  if (kind == "random-field") {
    MeshWithField m = subdivided_sphere(cfg.size < 0 ? 1 : cfg.size);
    m.field = random_field(m.mesh, cfg.seed);
    return write_mesh(m);
  }
  if (kind == "bumps") return write_mesh(realize_tree(star_tree(cfg.size < 0 ? 3 : cfg.size)));
  if (kind == "double-fork") return write_mesh(realize_tree(double_fork_tree()));
  if (kind == "tree") {
    return write_mesh(realize_tree(random_realizable_tree(cfg.size < 0 ? 10 : cfg.size, cfg.symmetry, cfg.seed)));
  }
  if (kind == "corpus") {
    if (cfg.out.empty() || cfg.out == "-") throw Error(ErrorCode::Parse, "gen corpus needs --out <directory>");
    const int size = cfg.size < 0 ? 200 : cfg.size;
    fs::create_directories(cfg.out);
    Json manifest;
    manifest["schema"] = kSchema;
    manifest["seed"] = cfg.seed;
    manifest["size"] = size;
    manifest["items"] = Json::array();
    for (int i = 0; i < size; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "item-%04d.json", i);
      Json entry;
      entry["file"] = name;
      const MeshWithField m = corpus_item(cfg.seed, i, entry);
      write_text_file(fs::path(cfg.out) / name, dump(mesh_to_json(m)));
      manifest["items"].push_back(entry);
    }
    write_text_file(fs::path(cfg.out) / "manifest.json", dump(manifest));
    out << "wrote " << size << " items to " << cfg.out << "\n";
    return 0;
  }
  throw Error(ErrorCode::Parse, "unknown gen kind '" + kind + "'");
}

int cmd_selftest(const Config& cfg, std::ostream& out, std::ostream& err) {
  int code = 0;
  if (!cfg.input.empty()) {
    if (!fs::is_directory(cfg.input)) throw Error(ErrorCode::Parse, cfg.input + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.input)) {
      const auto ext = entry.path().extension();
      if (entry.path().filename() == "manifest.json") continue;
      if (ext == ".json" || ext == ".off") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      try {
        const MeshWithField m = read_mesh_file(file);
        validate_surface(m.mesh);
        const FieldClassReport cls = classify_field(m.mesh, m.field);
        if (!cls.valid()) throw Error(*cls.problem, cls.detail);
      } catch (const Error& e) {
        err << file.string() << ": " << e.what() << "\n";
        code = std::max(code, exit_code_for(e.code()));
      }
    }
    out << "fixtures: " << files.size() << " checked, " << (code == 0 ? "all valid" : "some invalid") << "\n";
  }
  const auto start = std::chrono::steady_clock::now();
  bool all = true;
  for (int id = 1; id <= kCriteria; ++id) {
    const CriterionResult result = run_criterion(id);
    out << format_criterion(result) << "\n";
    all = all && result.passed;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << "total: " << format_number(std::round(seconds * 100) / 100) << " s\n";
  if (!all) code = std::max(code, kExitVerification);
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reeb graphs of functions on the sphere and their automorphism groups", "reebsplit"};
  app.require_subcommand(1);
  Config cfg;

  auto add_input = [&](CLI::App* sub) { sub->add_option("--input,-i", cfg.input, "mesh+field JSON or OFF file"); };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out,-o", cfg.out, "output path (default: stdout)"); };
  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", cfg.json, "machine-readable output"); };

  auto* validate = app.add_subcommand("validate", "check the surface and classify the field");
  add_input(validate);
  add_out(validate);
  add_json(validate);

  auto* reeb = app.add_subcommand("reeb", "build the Reeb graph");
  add_input(reeb);
  add_out(reeb);
  add_json(reeb);
  reeb->add_option("--dot", cfg.dot, "write DOT to this path ('-' for stdout)");

  auto* aut = app.add_subcommand("aut", "enumerate the label-preserving automorphism group");
  aut->add_option("--input,-i", cfg.input, "mesh+field JSON, OFF, or tree JSON");
  add_out(aut);
  add_json(aut);

  auto* split = app.add_subcommand("split", "cut at a fixed edge and verify the product decomposition");
  add_input(split);
  add_out(split);
  add_json(split);
  split->add_flag("--all-edges", cfg.all_edges, "verify every fixed edge");
  split->add_option("--group", cfg.group, "use this group dump instead of enumerating");
  split->add_option("--edge", cfg.edge, "Reeb edge id to cut");
  split->add_option("--cut-value", cfg.cut_value, "level to cut at");
  split->add_flag("--timing", cfg.timing, "report run time");

  auto* gen = app.add_subcommand("gen", "write fixtures and corpora");
  gen->add_option("kind", cfg.kind, "octahedron, sphere, random-field, bumps, double-fork, tree, corpus")
      ->required();
  add_out(gen);
  gen->add_option("--seed", cfg.seed, "random seed");
  gen->add_option("--size", cfg.size, "levels, branches, vertex budget or item count");
  gen->add_option("--symmetry", cfg.symmetry, "identical branches to graft (tree)");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--input,-i", cfg.input, "also validate every fixture in this directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) return cmd_validate(cfg, out, err);
    if (reeb->parsed()) return cmd_reeb(cfg, out);
    if (aut->parsed()) return cmd_aut(cfg, out);
    if (split->parsed()) return cmd_split(cfg, out);
    if (gen->parsed()) return cmd_gen(cfg, out);
    if (selftest->parsed()) return cmd_selftest(cfg, out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace reebsplit
