#include "cdyn/spec_json.hpp"

#include <fstream>
#include <sstream>

#include "cdyn/error.hpp"

namespace cdyn {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::Parse, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    bad(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

int small_int(const Json& j, const char* what) {
  const Int v = int_from_json(j);
  if (!v.fits_sint_p()) {
    bad(std::string(what) + " is out of range");
  }
  return static_cast<int>(v.get_si());
}

std::vector<Int> int_list(const Json& j, const char* what) {
  if (!j.is_array()) {
    bad(std::string(what) + " must be an array");
  }
  std::vector<Int> out;
  for (const auto& e : j) out.push_back(int_from_json(e));
  return out;
}

}  // namespace

Int int_from_json(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_int(j.get<std::string>());
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Int(std::to_string(j.get<unsigned long long>())) : Int(std::to_string(j.get<long long>()));
  }
  bad("expected an integer or decimal string, got " + j.dump());
}

Json int_to_json(const Int& x) { return to_dec(x); }

SystemDocument system_document_from_json(const Json& j) {
  const std::string family = field(j, "family").is_string() ? field(j, "family").get<std::string>() : "";
  if (family == "collatz") {
    return SystemSpec::collatz();
  }
  if (family == "qxd") {
    return SystemSpec::qxd(int_from_json(field(j, "q")), int_from_json(field(j, "d")));
  }
  if (family == "alphabeta") {
    return SystemSpec::alphabeta(small_int(field(j, "k"), "k"), int_list(field(j, "alpha"), "alpha"),
                                 int_list(field(j, "beta"), "beta"));
  }
  if (family == "table") {
    FiniteTable t;
    t.k = small_int(field(j, "k"), "k");
    t.states = int_list(field(j, "states"), "states");
    const Json& branch = field(j, "branch");
    const Json& image = field(j, "image");
    if (!branch.is_object() || !image.is_object()) {
      bad("branch and image must be objects keyed by state");
    }
    for (const auto& [key, value] : branch.items()) {
      t.branch[int_from_json(Json(key))] = small_int(value, "branch index");
    }
    for (const auto& [key, value] : image.items()) {
      t.image[int_from_json(Json(key))] = int_from_json(value);
    }
    return SystemSpec{std::move(t)};
  }
  if (family == "shift") {
    return ShiftSpec{small_int(field(j, "k"), "k")};
  }
  bad("unknown family \"" + family + "\"");
}

SystemSpec system_spec_from_json(const Json& j) {
  auto doc = system_document_from_json(j);
  if (std::holds_alternative<ShiftSpec>(doc)) {
    throw Error(ErrorCode::InvalidSpec, "the shift family has no integer state set; use it with `code`");
  }
  return std::get<SystemSpec>(std::move(doc));
}

Json system_spec_to_json(const SystemSpec& spec) {
  Json j;
  if (const auto* f = std::get_if<QxPlusD>(&spec.family)) {
    j["family"] = "qxd";
    j["q"] = to_dec(f->q);
    j["d"] = to_dec(f->d);
  } else if (const auto* f = std::get_if<AlphaBeta>(&spec.family)) {
    j["family"] = "alphabeta";
    j["k"] = f->k;
    j["alpha"] = to_dec(f->alpha);
    j["beta"] = to_dec(f->beta);
  } else {
    const auto& t = std::get<FiniteTable>(spec.family);
    j["family"] = "table";
    j["k"] = t.k;
    j["states"] = to_dec(t.states);
    Json branch = Json::object();
    Json image = Json::object();
    for (const auto& [x, b] : t.branch) branch[to_dec(x)] = b;
    for (const auto& [x, y] : t.image) image[to_dec(x)] = to_dec(y);
    j["branch"] = branch;
    j["image"] = image;
  }
  return j;
}

Morphism morphism_from_json(const Json& j, const DynamicalSystem& source, const DynamicalSystem& target) {
  if (!j.is_object()) {
    bad("morphism must be a JSON object");
  }
  if (j.contains("affine")) {
    const Json& a = j.at("affine");
    return Morphism::affine(source, target, int_from_json(field(a, "u")), int_from_json(field(a, "v")));
  }
  const Json& table = j.contains("table") ? j.at("table") : j;
  if (!table.is_object()) {
    bad("morphism table must be an object");
  }
  std::map<Int, Int> map;
  for (const auto& [key, value] : table.items()) {
    map[int_from_json(Json(key))] = int_from_json(value);
  }
  return Morphism::table(source, target, std::move(map));
}

Json morphism_to_json(const Morphism& phi) {
  Json j;
  if (const auto* t = std::get_if<Morphism::Table>(&phi.rule())) {
    Json table = Json::object();
    for (const auto& [x, y] : t->map) table[to_dec(x)] = to_dec(y);
    j["table"] = table;
  } else if (const auto* a = std::get_if<Morphism::Affine>(&phi.rule())) {
    j["affine"] = {{"u", to_dec(a->u)}, {"v", to_dec(a->v)}};
  } else {
    throw Error(ErrorCode::InvalidSpec, "composite morphisms have no JSON form");
  }
  return j;
}

std::vector<Int> states_from_json(const Json& j) {
  if (j.is_object()) {
    return int_list(field(j, "states"), "states");
  }
  return int_list(j, "state set");
}

Json word_to_json(const Word& w) { return w.symbols; }

Json cycles_to_json(const std::vector<CycleEntry>& cycles) {
  Json out = Json::array();
  for (const auto& c : cycles) {
    out.push_back({{"word", word_to_json(c.word)}, {"cycle", to_dec(c.cycle)}, {"length", c.cycle.size()}});
  }
  return out;
}

Json rational_vector_to_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_dec(q));
  return out;
}

Json basis_to_json(const SubspaceBasis& basis) {
  Json out = Json::array();
  if (basis.mode == Arithmetic::Exact) {
    for (const auto& v : basis.exact) out.push_back(rational_vector_to_json(v));
  } else {
    for (const auto& v : basis.approx) out.push_back(v);
  }
  return out;
}

SubspaceBasis basis_from_json(const Json& j, std::size_t dim) {
  if (!j.is_array()) {
    bad("basis must be an array of vectors");
  }
  std::vector<RationalVector> vectors;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != dim) {
      bad("basis vector must have " + std::to_string(dim) + " entries");
    }
    RationalVector r;
    for (const auto& e : v) {
      if (e.is_string()) {
        try {
          r.push_back(parse_rational(e.get<std::string>()));
        } catch (const Error& err) {
          bad(err.what());
        }
      } else {
        r.emplace_back(int_from_json(e));
      }
    }
    vectors.push_back(std::move(r));
  }
  return SubspaceBasis::from_vectors(vectors);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot read " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

}  // namespace cdyn
