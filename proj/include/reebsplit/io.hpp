#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "reebsplit/mesh.hpp"
#include "reebsplit/reeb.hpp"
#include "reebsplit/treeaut.hpp"

namespace reebsplit {

inline constexpr std::string_view kSchema = "reeb-split/1";

using Json = nlohmann::ordered_json;

// Mesh+field JSON: {"vertices": [[x,y,z],...], "triangles": [[i,j,k],...],
// "values": [f,...]}. Throws Error(Parse) on malformed documents and
// Error(IndexOutOfRange) on length mismatches.
MeshWithField mesh_from_json(const Json& doc);
Json mesh_to_json(const MeshWithField& mesh);

// OFF positions plus a sidecar with one value per line.
MeshWithField read_off(const std::filesystem::path& off, const std::filesystem::path& values);

// Reads mesh+field JSON, or OFF when the path ends in .off (values taken from
// the same path with extension .values).
MeshWithField read_mesh_file(const std::filesystem::path& path);

// Tree JSON: {"labels": [...], "edges": [[a,b],...], "marked": v (optional)}.
LabeledTree tree_from_json(const Json& doc);
Json tree_to_json(const LabeledTree& tree);
bool is_tree_json(const Json& doc);

Json reeb_to_json(const ReebGraph& graph);
Json group_to_json(const AutGroup& group);
// Reads the "elements" array of a group dump.
AutGroup group_from_json(const Json& doc);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace reebsplit
