#include "reebsplit/io.hpp"

#include <fstream>
#include <sstream>

#include "reebsplit/error.hpp"

namespace reebsplit {

namespace {

template <typename T>
T get(const Json& node, std::string_view what) {
  try {
    return node.get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

const Json& member(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(ErrorCode::Parse, std::string("missing \"") + key + "\"");
  return doc.at(key);
}

}  // namespace

MeshWithField mesh_from_json(const Json& doc) {
  auto positions = get<std::vector<Vec3>>(member(doc, "vertices"), "vertices");
  auto triangles = get<std::vector<Triangle>>(member(doc, "triangles"), "triangles");
  auto values = get<std::vector<double>>(member(doc, "values"), "values");
  if (values.size() != positions.size()) {
    throw Error(ErrorCode::IndexOutOfRange, std::to_string(values.size()) + " values for " +
                                                std::to_string(positions.size()) + " vertices");
  }
  TriangleMesh mesh(std::move(positions), std::move(triangles));
  return {std::move(mesh), ScalarField(std::move(values))};
}

Json mesh_to_json(const MeshWithField& m) {
  Json doc;
  doc["schema"] = kSchema;
  doc["vertices"] = Json::array();
  for (const Vec3& p : m.mesh.positions()) doc["vertices"].push_back(p);
  doc["triangles"] = Json::array();
  for (const Triangle& t : m.mesh.triangles()) doc["triangles"].push_back(t);
  doc["values"] = Json(std::vector<double>(m.field.values().begin(), m.field.values().end()));
  return doc;
}

MeshWithField read_off(const std::filesystem::path& off, const std::filesystem::path& values_path) {
  std::ifstream in(off);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + off.string());
  std::string header;
  in >> header;
  if (header != "OFF") throw Error(ErrorCode::Parse, off.string() + ": missing OFF header");
  std::size_t nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne)) throw Error(ErrorCode::Parse, off.string() + ": bad counts");
  std::vector<Vec3> positions(nv);
  for (Vec3& p : positions) {
    if (!(in >> p[0] >> p[1] >> p[2])) throw Error(ErrorCode::Parse, off.string() + ": truncated vertices");
  }
  std::vector<Triangle> triangles(nf);
  for (Triangle& t : triangles) {
    int k = 0;
    if (!(in >> k) || k != 3) throw Error(ErrorCode::Parse, off.string() + ": only triangles are supported");
    if (!(in >> t[0] >> t[1] >> t[2])) throw Error(ErrorCode::Parse, off.string() + ": truncated faces");
  }
  std::ifstream vin(values_path);
  if (!vin) throw Error(ErrorCode::Parse, "cannot open " + values_path.string());
  std::vector<double> values;
  double x = 0.0;
  while (vin >> x) values.push_back(x);
  if (!vin.eof()) throw Error(ErrorCode::Parse, values_path.string() + ": not a number");
  if (values.size() != nv) {
    throw Error(ErrorCode::IndexOutOfRange,
                std::to_string(values.size()) + " values for " + std::to_string(nv) + " vertices");
  }
  return {TriangleMesh(std::move(positions), std::move(triangles)), ScalarField(std::move(values))};
}

MeshWithField read_mesh_file(const std::filesystem::path& path) {
  if (path.extension() == ".off") {
    auto values = path;
    values.replace_extension(".values");
    return read_off(path, values);
  }
  return mesh_from_json(read_json_file(path));
}

LabeledTree tree_from_json(const Json& doc) {
  auto labels = get<std::vector<double>>(member(doc, "labels"), "labels");
  auto edges = get<std::vector<std::pair<int, int>>>(member(doc, "edges"), "edges");
  std::optional<int> marked;
  if (doc.contains("marked") && !doc.at("marked").is_null()) marked = get<int>(doc.at("marked"), "marked");
  return LabeledTree(std::move(labels), std::move(edges), marked);
}

Json tree_to_json(const LabeledTree& tree) {
  Json doc;
  doc["schema"] = kSchema;
  doc["labels"] = Json(std::vector<double>(tree.labels().begin(), tree.labels().end()));
  doc["edges"] = Json::array();
  for (const auto& [a, b] : tree.edges()) doc["edges"].push_back({a, b});
  if (tree.marked()) doc["marked"] = *tree.marked();
  return doc;
}

bool is_tree_json(const Json& doc) { return doc.is_object() && doc.contains("labels") && doc.contains("edges"); }

Json reeb_to_json(const ReebGraph& graph) {
  Json doc;
  doc["schema"] = kSchema;
  doc["vertices"] = Json::array();
  for (const ReebVertex& v : graph.vertices) {
    doc["vertices"].push_back(
        {{"id", v.id}, {"label", v.label}, {"kind", to_string(v.kind)}, {"multiplicity", v.multiplicity}});
  }
  doc["edges"] = Json::array();
  for (const ReebEdge& e : graph.edges) doc["edges"].push_back({{"id", e.id}, {"lower", e.lower}, {"upper", e.upper}});
  return doc;
}

Json group_to_json(const AutGroup& group) {
  Json doc;
  doc["schema"] = kSchema;
  doc["degree"] = group.degree;
  doc["order"] = group.order();
  Json histogram = Json::object();
  for (const auto& [order, count] : element_order_histogram(group)) histogram[std::to_string(order)] = count;
  doc["histogram"] = histogram;
  doc["elements"] = group.elements;
  doc["generators"] = group.generators;
  return doc;
}

AutGroup group_from_json(const Json& doc) {
  auto elements = get<std::vector<Permutation>>(member(doc, "elements"), "elements");
  if (elements.empty()) throw Error(ErrorCode::Parse, "group dump has no elements");
  const std::size_t degree = elements.front().size();
  for (const Permutation& p : elements) {
    if (p.size() != degree) throw Error(ErrorCode::Parse, "group dump mixes permutation sizes");
    std::vector<char> hit(degree, 0);
    for (int x : p) {
      if (x < 0 || static_cast<std::size_t>(x) >= degree || hit[x]) {
        throw Error(ErrorCode::Parse, "group dump holds a non-permutation");
      }
      hit[x] = 1;
    }
  }
  return make_group(degree, std::move(elements));
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path.string());
  out << text;
}

}  // namespace reebsplit
