#pragma once

// JSON manifests: a frame, an optional split, named vector fields, soliton runs
// and a block of claimed values that are only ever compared against.
//
// Frame indices are 1-based in files and 0-based in memory.

#include "ryssub/soliton.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace ryssub {

using Json = nlohmann::ordered_json;

class ManifestError : public Error {
public:
  explicit ManifestError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string> &problems() const noexcept { return problems_; }

private:
  static std::string join(const std::vector<std::string> &p) {
    std::string out = "invalid manifest:";
    for (const auto &s : p) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> problems_;
};

struct SplitSpec {
  std::vector<std::size_t> vertical;
  std::vector<std::size_t> horizontal;
  std::string map_note;
};

struct SolitonRun {
  Scalar alpha;
  Scalar beta;
  Domain domain = Domain::total;
  std::string potential = "V";
  std::string xi = "xi";
};

struct ConnectionClaim {
  std::size_t i = 0;  // nabla_{E_i} E_j
  std::size_t j = 0;
  FrameVectorField value;
};

struct RiemannClaim {
  std::size_t i = 0;  // R(E_i, E_j) E_k
  std::size_t j = 0;
  std::size_t k = 0;
  FrameVectorField value;
};

struct CaseClaim {
  Scalar alpha;
  Scalar beta;
  std::optional<Scalar> lambda;
  std::optional<Scalar> mu;
  std::optional<Classification> classification;
};

struct DomainClaims {
  bool solve_with_claimed = false;
  std::optional<Matrix> ricci;  // domain-local order
  std::optional<Scalar> scalar;
  std::vector<ConnectionClaim> connection;
  std::vector<RiemannClaim> riemann;
  std::optional<AffineForm> lambda_affine;
  std::optional<AffineForm> mu_affine;
  std::vector<CaseClaim> cases;
  std::map<std::string, std::string> notes;  // claim key -> note

  ClaimedTensors tensors() const { return {ricci, scalar}; }
};

struct Manifest {
  std::string name;
  std::string description;
  std::size_t dimension = 0;
  Matrix metric;  // explicit, identity when the file says "identity"
  bool strict = false;
  std::vector<Bracket> brackets;  // i < j, coefficient indices ascending
  std::optional<SplitSpec> split;
  std::map<std::string, FrameVectorField> fields;
  std::vector<SolitonRun> soliton;
  std::map<Domain, DomainClaims> claimed;
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class ManifestReader {
public:
  std::vector<std::string> problems;

  void fail(const std::string &path, const std::string &what) { problems.push_back(path + ": " + what); }

  /// Rejects keys outside `allowed`; returns false when `j` is not an object.
  bool object(const Json &j, const std::string &path, std::initializer_list<const char *> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto &[key, _] : j.items()) {
      bool ok = false;
      for (const char *a : allowed) ok = ok || key == a;
      if (!ok) fail(path + "." + key, "unknown key");
    }
    return true;
  }

  std::optional<Scalar> scalar(const Json &j, const std::string &path) {
    try {
      if (j.is_string()) return parse_scalar(j.get<std::string>());
      if (j.is_number_integer()) return Scalar(j.get<long>());
      fail(path, "expected a scalar literal string");
    } catch (const ParseError &e) {
      fail(path, e.what());
    }
    return std::nullopt;
  }

  std::optional<std::string> string(const Json &j, const std::string &path) {
    if (j.is_string()) return j.get<std::string>();
    fail(path, "expected a string");
    return std::nullopt;
  }

  /// 1-based index in [1, n]; returns the 0-based value.
  std::optional<std::size_t> index(const Json &j, const std::string &path, std::size_t n) {
    if (!j.is_number_integer()) {
      fail(path, "expected an integer index");
      return std::nullopt;
    }
    const long v = j.get<long>();
    if (v < 1 || static_cast<std::size_t>(v) > n) {
      fail(path, "index " + std::to_string(v) + " out of range 1.." + std::to_string(n));
      return std::nullopt;
    }
    return static_cast<std::size_t>(v - 1);
  }

  std::optional<std::size_t> index_key(const std::string &key, const std::string &path, std::size_t n) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(key, &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos != key.size() || key.empty()) {
      fail(path, "expected an integer key");
      return std::nullopt;
    }
    if (v < 1 || static_cast<std::size_t>(v) > n) {
      fail(path, "index " + key + " out of range 1.." + std::to_string(n));
      return std::nullopt;
    }
    return static_cast<std::size_t>(v - 1);
  }

  /// Sparse {"k": literal} map into an n-vector.
  std::optional<FrameVectorField> sparse_vector(const Json &j, const std::string &path, std::size_t n) {
    if (!j.is_object()) {
      fail(path, "expected an object mapping indices to literals");
      return std::nullopt;
    }
    FrameVectorField v(n);
    bool ok = true;
    for (const auto &[key, val] : j.items()) {
      const auto k = index_key(key, path + "." + key, n);
      const auto s = scalar(val, path + "." + key);
      if (k && s)
        v[*k] = *s;
      else
        ok = false;
    }
    return ok ? std::optional(v) : std::nullopt;
  }

  std::optional<Matrix> matrix(const Json &j, const std::string &path, std::size_t n) {
    if (!j.is_array() || j.size() != n) {
      fail(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
      return std::nullopt;
    }
    Matrix m(n, n);
    bool ok = true;
    for (std::size_t r = 0; r < n; ++r) {
      const std::string rp = path + "[" + std::to_string(r) + "]";
      if (!j[r].is_array() || j[r].size() != n) {
        fail(rp, "expected a row of " + std::to_string(n) + " literals");
        ok = false;
        continue;
      }
      for (std::size_t c = 0; c < n; ++c) {
        const auto s = scalar(j[r][c], rp + "[" + std::to_string(c) + "]");
        if (s)
          m(r, c) = *s;
        else
          ok = false;
      }
    }
    return ok ? std::optional(m) : std::nullopt;
  }

  std::optional<std::vector<std::size_t>> index_list(const Json &j, const std::string &path, std::size_t n) {
    if (!j.is_array()) {
      fail(path, "expected a list of indices");
      return std::nullopt;
    }
    std::vector<std::size_t> out;
    bool ok = true;
    for (std::size_t a = 0; a < j.size(); ++a) {
      const auto i = index(j[a], path + "[" + std::to_string(a) + "]", n);
      if (i)
        out.push_back(*i);
      else
        ok = false;
    }
    std::sort(out.begin(), out.end());
    return ok ? std::optional(out) : std::nullopt;
  }

  std::optional<AffineForm> affine(const Json &j, const std::string &path) {
    if (!object(j, path, {"c0", "c_alpha", "c_beta"})) return std::nullopt;
    AffineForm f;
    bool ok = true;
    auto get = [&](const char *key, Scalar &dst) {
      if (!j.contains(key)) return;
      const auto s = scalar(j[key], path + "." + key);
      if (s)
        dst = *s;
      else
        ok = false;
    };
    get("c0", f.c0);
    get("c_alpha", f.c_alpha);
    get("c_beta", f.c_beta);
    return ok ? std::optional(f) : std::nullopt;
  }
};

inline std::size_t domain_dim(const Manifest &m, Domain d) {
  if (d == Domain::total || !m.split) return m.dimension;
  return d == Domain::fiber ? m.split->vertical.size() : m.split->horizontal.size();
}

inline Classification parse_classification(const std::string &s) {
  if (s == "shrinking") return Classification::shrinking;
  if (s == "expanding") return Classification::expanding;
  if (s == "steady") return Classification::steady;
  throw Error("unknown classification '" + s + "' (expected shrinking, expanding or steady)");
}

inline void read_claims(ManifestReader &rd, const Json &j, const std::string &path, Manifest &m, Domain d) {
  if (!rd.object(j, path, {"solve_with", "ricci", "scalar", "connection", "riemann", "lambda_affine", "mu_affine",
                           "cases", "notes"}))
    return;
  DomainClaims c;
  const std::size_t n = m.dimension;
  if (d != Domain::total && !m.split) rd.fail(path, "claims for domain " + to_string(d) + " need a split");
  if (j.contains("solve_with")) {
    const auto s = rd.string(j["solve_with"], path + ".solve_with");
    if (s && *s != "engine" && *s != "claimed") rd.fail(path + ".solve_with", "expected \"engine\" or \"claimed\"");
    c.solve_with_claimed = s && *s == "claimed";
  }
  if (j.contains("ricci")) c.ricci = rd.matrix(j["ricci"], path + ".ricci", domain_dim(m, d));
  if (j.contains("scalar")) c.scalar = rd.scalar(j["scalar"], path + ".scalar");
  if (j.contains("connection")) {
    const Json &list = j["connection"];
    if (!list.is_array()) rd.fail(path + ".connection", "expected a list");
    for (std::size_t a = 0; list.is_array() && a < list.size(); ++a) {
      const std::string p = path + ".connection[" + std::to_string(a) + "]";
      if (!rd.object(list[a], p, {"i", "j", "value"})) continue;
      const auto i = rd.index(list[a].value("i", Json()), p + ".i", n);
      const auto jj = rd.index(list[a].value("j", Json()), p + ".j", n);
      const auto v = rd.sparse_vector(list[a].value("value", Json()), p + ".value", n);
      if (i && jj && v) c.connection.push_back({*i, *jj, *v});
    }
  }
  if (j.contains("riemann")) {
    const Json &list = j["riemann"];
    if (!list.is_array()) rd.fail(path + ".riemann", "expected a list");
    for (std::size_t a = 0; list.is_array() && a < list.size(); ++a) {
      const std::string p = path + ".riemann[" + std::to_string(a) + "]";
      if (!rd.object(list[a], p, {"i", "j", "k", "value"})) continue;
      const auto i = rd.index(list[a].value("i", Json()), p + ".i", n);
      const auto jj = rd.index(list[a].value("j", Json()), p + ".j", n);
      const auto k = rd.index(list[a].value("k", Json()), p + ".k", n);
      const auto v = rd.sparse_vector(list[a].value("value", Json()), p + ".value", n);
      if (i && jj && k && v) c.riemann.push_back({*i, *jj, *k, *v});
    }
  }
  if (j.contains("lambda_affine")) c.lambda_affine = rd.affine(j["lambda_affine"], path + ".lambda_affine");
  if (j.contains("mu_affine")) c.mu_affine = rd.affine(j["mu_affine"], path + ".mu_affine");
  if (j.contains("cases")) {
    const Json &list = j["cases"];
    if (!list.is_array()) rd.fail(path + ".cases", "expected a list");
    for (std::size_t a = 0; list.is_array() && a < list.size(); ++a) {
      const std::string p = path + ".cases[" + std::to_string(a) + "]";
      if (!rd.object(list[a], p, {"alpha", "beta", "lambda", "mu", "classification"})) continue;
      CaseClaim cc;
      const auto al = rd.scalar(list[a].value("alpha", Json()), p + ".alpha");
      const auto be = rd.scalar(list[a].value("beta", Json()), p + ".beta");
      if (al) cc.alpha = *al;
      if (be) cc.beta = *be;
      if (list[a].contains("lambda")) cc.lambda = rd.scalar(list[a]["lambda"], p + ".lambda");
      if (list[a].contains("mu")) cc.mu = rd.scalar(list[a]["mu"], p + ".mu");
      if (list[a].contains("classification")) {
        const auto s = rd.string(list[a]["classification"], p + ".classification");
        try {
          if (s) cc.classification = parse_classification(*s);
        } catch (const Error &e) {
          rd.fail(p + ".classification", e.what());
        }
      }
      c.cases.push_back(std::move(cc));
    }
  }
  if (j.contains("notes")) {
    const Json &notes = j["notes"];
    if (!notes.is_object()) rd.fail(path + ".notes", "expected an object of strings");
    else
      for (const auto &[key, val] : notes.items())
        if (const auto s = rd.string(val, path + ".notes." + key)) c.notes[key] = *s;
  }
  m.claimed[d] = std::move(c);
}

}  // namespace detail

/// Validates and converts a parsed JSON document. Throws ManifestError listing every problem.
inline Manifest manifest_from_json(const Json &j) {
  detail::ManifestReader rd;
  Manifest m;
  if (!rd.object(j, "$", {"name", "description", "dimension", "metric", "strict", "brackets", "split", "fields",
                          "soliton", "claimed"}))
    throw ManifestError(rd.problems);

  if (!j.contains("name"))
    rd.fail("$.name", "required");
  else if (auto s = rd.string(j["name"], "$.name"))
    m.name = *s;
  if (j.contains("description"))
    if (auto s = rd.string(j["description"], "$.description")) m.description = *s;
  if (!j.contains("dimension") || !j["dimension"].is_number_integer() || j["dimension"].get<long>() < 1) {
    rd.fail("$.dimension", "required positive integer");
    throw ManifestError(rd.problems);
  }
  m.dimension = j["dimension"].get<std::size_t>();
  const std::size_t n = m.dimension;

  m.metric = Matrix::identity(n);
  if (j.contains("metric")) {
    const Json &g = j["metric"];
    if (g.is_string()) {
      if (g.get<std::string>() != "identity") rd.fail("$.metric", "expected \"identity\" or a matrix");
    } else if (auto mm = rd.matrix(g, "$.metric", n)) {
      m.metric = *mm;
    }
  }
  if (j.contains("strict")) {
    if (j["strict"].is_boolean())
      m.strict = j["strict"].get<bool>();
    else
      rd.fail("$.strict", "expected true or false");
  }

  if (j.contains("brackets")) {
    const Json &list = j["brackets"];
    if (!list.is_array()) rd.fail("$.brackets", "expected a list");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t a = 0; list.is_array() && a < list.size(); ++a) {
      const std::string p = "$.brackets[" + std::to_string(a) + "]";
      if (!rd.object(list[a], p, {"i", "j", "coeffs"})) continue;
      const auto i = rd.index(list[a].value("i", Json()), p + ".i", n);
      const auto jj = rd.index(list[a].value("j", Json()), p + ".j", n);
      const auto v = rd.sparse_vector(list[a].value("coeffs", Json()), p + ".coeffs", n);
      if (!i || !jj || !v) continue;
      if (*i >= *jj) {
        rd.fail(p, "brackets are listed with i < j");
        continue;
      }
      if (!seen.insert({*i, *jj}).second) {
        rd.fail(p, "duplicate bracket");
        continue;
      }
      Bracket b{*i, *jj, {}};
      for (std::size_t k = 0; k < n; ++k)
        if (!(*v)[k].is_zero()) b.coeffs.emplace_back(k, (*v)[k]);
      m.brackets.push_back(std::move(b));
    }
    std::sort(m.brackets.begin(), m.brackets.end(),
              [](const Bracket &x, const Bracket &y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
  }

  if (j.contains("split") && rd.object(j["split"], "$.split", {"vertical", "horizontal", "map_note"})) {
    const Json &s = j["split"];
    SplitSpec sp;
    auto v = rd.index_list(s.value("vertical", Json()), "$.split.vertical", n);
    auto h = rd.index_list(s.value("horizontal", Json()), "$.split.horizontal", n);
    if (s.contains("map_note"))
      if (auto note = rd.string(s["map_note"], "$.split.map_note")) sp.map_note = *note;
    if (v && h) {
      sp.vertical = *v;
      sp.horizontal = *h;
      m.split = sp;
    }
  }

  if (j.contains("fields")) {
    const Json &f = j["fields"];
    if (!f.is_object()) rd.fail("$.fields", "expected an object of named vector fields");
    else
      for (const auto &[key, val] : f.items())
        if (auto v = rd.sparse_vector(val, "$.fields." + key, n)) m.fields[key] = *v;
  }

  if (j.contains("soliton")) {
    Json runs = j["soliton"];
    if (runs.is_object()) runs = Json::array({runs});
    if (!runs.is_array()) rd.fail("$.soliton", "expected an object or a list of runs");
    for (std::size_t a = 0; runs.is_array() && a < runs.size(); ++a) {
      const std::string p = "$.soliton[" + std::to_string(a) + "]";
      if (!rd.object(runs[a], p, {"alpha", "beta", "domain", "potential", "xi"})) continue;
      SolitonRun r;
      if (auto s = rd.scalar(runs[a].value("alpha", Json()), p + ".alpha")) r.alpha = *s;
      if (auto s = rd.scalar(runs[a].value("beta", Json()), p + ".beta")) r.beta = *s;
      if (runs[a].contains("domain")) {
        if (auto s = rd.string(runs[a]["domain"], p + ".domain")) try {
            r.domain = parse_domain(*s);
          } catch (const Error &e) {
            rd.fail(p + ".domain", e.what());
          }
      }
      if (runs[a].contains("potential"))
        if (auto s = rd.string(runs[a]["potential"], p + ".potential")) r.potential = *s;
      if (runs[a].contains("xi"))
        if (auto s = rd.string(runs[a]["xi"], p + ".xi")) r.xi = *s;
      if (!m.fields.count(r.potential)) rd.fail(p + ".potential", "no field named '" + r.potential + "'");
      if (!m.fields.count(r.xi)) rd.fail(p + ".xi", "no field named '" + r.xi + "'");
      if (r.domain != Domain::total && !m.split) rd.fail(p + ".domain", "domain " + to_string(r.domain) + " needs a split");
      m.soliton.push_back(std::move(r));
    }
  }

  if (j.contains("claimed") && rd.object(j["claimed"], "$.claimed", {"total", "fiber", "horizontal"}))
    for (const auto &[key, val] : j["claimed"].items())
      if (key == "total" || key == "fiber" || key == "horizontal")
        detail::read_claims(rd, val, "$.claimed." + key, m, parse_domain(key));

  if (!rd.problems.empty()) throw ManifestError(rd.problems);
  return m;
}

inline Manifest parse_manifest(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ManifestError({std::string("$: not valid JSON: ") + e.what()});
  }
  return manifest_from_json(j);
}

inline Manifest load_manifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ManifestError({path.string() + ": cannot open file"});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

// ---------------------------------------------------------------------------
// Canonical output

namespace detail {

inline Json sparse_json(const FrameVectorField &v) {
  Json o = Json::object();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero()) o[std::to_string(k + 1)] = to_string(v[k]);
  return o;
}

inline Json matrix_json(const Matrix &m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json affine_json(const AffineForm &f) {
  return Json{{"c0", to_string(f.c0)}, {"c_alpha", to_string(f.c_alpha)}, {"c_beta", to_string(f.c_beta)}};
}

inline Json index_list_json(const std::vector<std::size_t> &v) {
  Json a = Json::array();
  for (auto i : v) a.push_back(i + 1);
  return a;
}

}  // namespace detail

inline Json manifest_to_json(const Manifest &m) {
  using namespace detail;
  Json j;
  j["name"] = m.name;
  if (!m.description.empty()) j["description"] = m.description;
  j["dimension"] = m.dimension;
  if (m.metric == Matrix::identity(m.dimension))
    j["metric"] = "identity";
  else
    j["metric"] = matrix_json(m.metric);
  if (m.strict) j["strict"] = true;
  Json br = Json::array();
  for (const auto &b : m.brackets) {
    FrameVectorField v(m.dimension);
    for (const auto &[k, c] : b.coeffs) v[k] += c;
    br.push_back(Json{{"i", b.i + 1}, {"j", b.j + 1}, {"coeffs", sparse_json(v)}});
  }
  j["brackets"] = std::move(br);
  if (m.split) {
    Json s{{"vertical", index_list_json(m.split->vertical)}, {"horizontal", index_list_json(m.split->horizontal)}};
    if (!m.split->map_note.empty()) s["map_note"] = m.split->map_note;
    j["split"] = std::move(s);
  }
  Json fields = Json::object();
  for (const auto &[name, v] : m.fields) fields[name] = sparse_json(v);
  j["fields"] = std::move(fields);
  Json runs = Json::array();
  for (const auto &r : m.soliton)
    runs.push_back(Json{{"alpha", to_string(r.alpha)},
                        {"beta", to_string(r.beta)},
                        {"domain", to_string(r.domain)},
                        {"potential", r.potential},
                        {"xi", r.xi}});
  j["soliton"] = std::move(runs);
  if (!m.claimed.empty()) {
    Json claimed = Json::object();
    for (const auto &[d, c] : m.claimed) {
      Json o;
      o["solve_with"] = c.solve_with_claimed ? "claimed" : "engine";
      if (c.ricci) o["ricci"] = matrix_json(*c.ricci);
      if (c.scalar) o["scalar"] = to_string(*c.scalar);
      if (!c.connection.empty()) {
        Json a = Json::array();
        for (const auto &x : c.connection) a.push_back(Json{{"i", x.i + 1}, {"j", x.j + 1}, {"value", sparse_json(x.value)}});
        o["connection"] = std::move(a);
      }
      if (!c.riemann.empty()) {
        Json a = Json::array();
        for (const auto &x : c.riemann)
          a.push_back(Json{{"i", x.i + 1}, {"j", x.j + 1}, {"k", x.k + 1}, {"value", sparse_json(x.value)}});
        o["riemann"] = std::move(a);
      }
      if (c.lambda_affine) o["lambda_affine"] = affine_json(*c.lambda_affine);
      if (c.mu_affine) o["mu_affine"] = affine_json(*c.mu_affine);
      if (!c.cases.empty()) {
        Json a = Json::array();
        for (const auto &x : c.cases) {
          Json cj{{"alpha", to_string(x.alpha)}, {"beta", to_string(x.beta)}};
          if (x.lambda) cj["lambda"] = to_string(*x.lambda);
          if (x.mu) cj["mu"] = to_string(*x.mu);
          if (x.classification) cj["classification"] = to_string(*x.classification);
          a.push_back(std::move(cj));
        }
        o["cases"] = std::move(a);
      }
      if (!c.notes.empty()) {
        Json notes = Json::object();
        for (const auto &[k, v] : c.notes) notes[k] = v;
        o["notes"] = std::move(notes);
      }
      claimed[to_string(d)] = std::move(o);
    }
    j["claimed"] = std::move(claimed);
  }
  return j;
}

inline std::string save_manifest(const Manifest &m) { return manifest_to_json(m).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// From manifest to engine objects

inline FrameManifold build_frame(const Manifest &m) {
  try {
    return FrameManifold(m.dimension, m.metric, m.brackets, m.strict ? Strictness::jacobi : Strictness::lenient);
  } catch (const ManifestError &) {
    throw;
  } catch (const Error &e) {
    throw ManifestError({std::string("$: ") + e.what()});
  }
}

inline std::optional<SubmersionSplit> build_split(const Manifest &m, const FrameManifold &frame) {
  if (!m.split) return std::nullopt;
  try {
    return SubmersionSplit(frame, m.split->vertical, m.split->horizontal);
  } catch (const Error &e) {
    throw ManifestError({std::string("$.split: ") + e.what()});
  }
}

inline const FrameVectorField &field(const Manifest &m, const std::string &name) {
  auto it = m.fields.find(name);
  if (it == m.fields.end()) throw Error("manifest has no field named '" + name + "'");
  return it->second;
}

/// First soliton run on `d`, if any.
inline const SolitonRun *run_for(const Manifest &m, Domain d) {
  for (const auto &r : m.soliton)
    if (r.domain == d) return &r;
  return nullptr;
}

}  // namespace ryssub
