#include "ovpack/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ovpack/errors.hpp"
#include "ovpack/offline.hpp"

namespace ovp {
namespace {

using nlohmann::json;

json rational_to_json(const Rational& r) {
  if (!r.num().fits_slong_p() || !r.den().fits_slong_p()) {
    throw InternalError("instance files carry num/den pairs that must fit in 64 bits");
  }
  return json::array({r.num().get_si(), r.den().get_si()});
}

Rational rational_from_json(const json& j, uint64_t line) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    throw ParseError(line, "expected a [num, den] integer pair");
  }
  const long num = j[0].get<long>();
  const long den = j[1].get<long>();
  if (den == 0) throw ParseError(line, "zero denominator");
  return Rational(num, den);
}

std::string kind_name(Objective::Kind kind) {
  switch (kind) {
    case Objective::Kind::kCardinality:
      return "cardinality";
    case Objective::Kind::kModular:
      return "modular";
    case Objective::Kind::kCoverage:
      return "coverage";
  }
  throw InternalError("kind_name: unreachable");
}

Objective::Kind kind_from_name(const std::string& name, uint64_t line) {
  if (name == "cardinality") return Objective::Kind::kCardinality;
  if (name == "modular") return Objective::Kind::kModular;
  if (name == "coverage") return Objective::Kind::kCoverage;
  throw ParseError(line, "unknown objective type '" + name + "'");
}

}  // namespace

Instance read_instance(std::istream& in) {
  Instance inst;
  std::string line;
  uint64_t line_no = 0;

  // Header.
  if (!std::getline(in, line)) throw ParseError(1, "empty instance file");
  ++line_no;
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) {
    throw ParseError(line_no, "header is not a JSON object");
  }
  if (!header.contains("dims") || !header["dims"].is_number_unsigned()) {
    throw ParseError(line_no, "header misses an unsigned 'dims'");
  }
  inst.dims = header["dims"].get<Dim>();
  if (!header.contains("objective") || !header["objective"].is_object() ||
      !header["objective"].contains("type")) {
    throw ParseError(line_no, "header misses objective.type");
  }
  inst.objective_kind =
      kind_from_name(header["objective"]["type"].get<std::string>(), line_no);
  if (header["objective"].contains("element_weights")) {
    for (const auto& [key, value] : header["objective"]["element_weights"].items()) {
      inst.element_weights[static_cast<ElementId>(std::stoul(key))] =
          rational_from_json(value, line_no);
    }
  }
  if (header.contains("meta")) {
    const json& m = header["meta"];
    inst.meta.generator = m.value("generator", std::string("file"));
    inst.meta.params = m.value("params", std::string());
    inst.meta.seed = m.value("seed", uint64_t{0});
  } else {
    inst.meta.generator = "file";
  }

  // Items, one per line, in arrival order.
  long last_id = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ParseError(line_no, "item line is not a JSON object");
    }
    Item item;
    if (!j.contains("id") || !j["id"].is_number_unsigned()) {
      throw ParseError(line_no, "item misses an unsigned 'id'");
    }
    item.id = j["id"].get<ItemId>();
    if (static_cast<long>(item.id) <= last_id) {
      throw ParseError(line_no, "item ids must be strictly increasing");
    }
    last_id = item.id;
    if (!j.contains("coords") || !j["coords"].is_array()) {
      throw ParseError(line_no, "item misses 'coords'");
    }
    std::vector<std::pair<Dim, Rational>> entries;
    for (const json& c : j["coords"]) {
      if (!c.is_array() || c.size() != 3 || !c[0].is_number_unsigned()) {
        throw ParseError(line_no, "coords entries must be [dim, num, den]");
      }
      entries.emplace_back(c[0].get<Dim>(),
                           rational_from_json(json::array({c[1], c[2]}), line_no));
    }
    try {
      item.weights = SparseWeightVector(std::move(entries), inst.dims);
    } catch (const ParamError& e) {
      throw ParseError(line_no, e.what());
    }
    if (inst.objective_kind == Objective::Kind::kModular) {
      if (!j.contains("value")) throw ParseError(line_no, "modular item misses 'value'");
      item.value = rational_from_json(j["value"], line_no);
      if (item.value.sign() < 0) throw ParseError(line_no, "negative item value");
    }
    if (inst.objective_kind == Objective::Kind::kCoverage) {
      if (!j.contains("covers") || !j["covers"].is_array()) {
        throw ParseError(line_no, "coverage item misses 'covers'");
      }
      for (const json& e : j["covers"]) {
        if (!e.is_number_unsigned()) throw ParseError(line_no, "covers must hold element ids");
        item.covers.push_back(e.get<ElementId>());
      }
    }
    inst.items.push_back(std::move(item));
  }

  if (header.contains("witness")) {
    const json& w = header["witness"];
    Witness witness;
    if (!w.contains("ids") || !w["ids"].is_array() || !w.contains("value")) {
      throw ParseError(1, "witness needs 'ids' and 'value'");
    }
    for (const json& id : w["ids"]) witness.ids.insert(id.get<ItemId>());
    witness.value = rational_from_json(w["value"], 1);
    if (!verify_claimed_opt(inst.items, inst.objective(), witness.ids, witness.value)) {
      throw ParseError(1, "witness does not verify against the items");
    }
    inst.witness = std::move(witness);
  }
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return read_instance(in);
}

void write_instance(const Instance& instance, std::ostream& out) {
  json header;
  header["schema"] = "ovpack-instance-v1";
  header["dims"] = instance.dims;
  header["objective"]["type"] = kind_name(instance.objective_kind);
  if (!instance.element_weights.empty()) {
    json ew = json::object();
    for (const auto& [e, w] : instance.element_weights) {
      ew[std::to_string(e)] = rational_to_json(w);
    }
    header["objective"]["element_weights"] = std::move(ew);
  }
  if (instance.witness) {
    json ids = json::array();
    for (ItemId id : instance.witness->ids) ids.push_back(id);
    header["witness"]["ids"] = std::move(ids);
    header["witness"]["value"] = rational_to_json(instance.witness->value);
  }
  if (!instance.meta.generator.empty()) {
    header["meta"]["generator"] = instance.meta.generator;
    header["meta"]["params"] = instance.meta.params;
    header["meta"]["seed"] = instance.meta.seed;
  }
  out << header.dump() << "\n";

  for (const Item& item : instance.items) {
    json j;
    j["id"] = item.id;
    json coords = json::array();
    for (const auto& [dim, w] : item.weights.entries()) {
      if (!w.num().fits_slong_p() || !w.den().fits_slong_p()) {
        throw InternalError("instance weight does not fit the file format");
      }
      coords.push_back(json::array({dim, w.num().get_si(), w.den().get_si()}));
    }
    j["coords"] = std::move(coords);
    if (instance.objective_kind == Objective::Kind::kModular) {
      j["value"] = rational_to_json(item.value);
    }
    if (instance.objective_kind == Objective::Kind::kCoverage) {
      j["covers"] = item.covers;
    }
    out << j.dump() << "\n";
  }
}

void write_instance_file(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot open '" + path + "' for writing");
  write_instance(instance, out);
}

Instance rescale_instance(const Instance& instance, const Rational& factor) {
  if (factor.sign() <= 0 || factor > Rational(1)) {
    throw ParamError("rescale: factor must lie in (0, 1]");
  }
  Instance scaled = instance;
  for (Item& item : scaled.items) {
    std::vector<std::pair<Dim, Rational>> entries;
    entries.reserve(item.weights.entries().size());
    for (const auto& [dim, w] : item.weights.entries()) {
      entries.emplace_back(dim, w * factor);
    }
    item.weights = SparseWeightVector(std::move(entries), scaled.dims);
  }
  if (!scaled.meta.params.empty()) scaled.meta.params += ",";
  scaled.meta.params += "rescaled=" + factor.str();
  return scaled;
}

}  // namespace ovp
