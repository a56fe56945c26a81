#pragma once

// JSON reports for the command line. Scalars are canonical literals; tensors are
// sparse lists of {indices, value} with 1-based ambient frame indices.

#include "ryssub/harmonic.hpp"
#include "ryssub/manifest.hpp"

namespace ryssub {

namespace report {

inline Json scalar(const Scalar &s) { return to_string(s); }

/// `frame` maps local positions to ambient indices.
template <std::size_t Rank>
Json sparse(const Tensor<Rank> &t, const std::vector<std::size_t> &frame) {
  Json out = Json::array();
  t.for_each_nonzero([&](const std::array<std::size_t, Rank> &idx, const Scalar &v) {
    Json ix = Json::array();
    for (auto i : idx) ix.push_back(frame.at(i) + 1);
    out.push_back(Json{{"indices", std::move(ix)}, {"value", to_string(v)}});
  });
  return out;
}

inline Json sparse(const Matrix &m, const std::vector<std::size_t> &frame) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero())
        out.push_back(Json{{"indices", Json::array({frame.at(i) + 1, frame.at(j) + 1})}, {"value", to_string(m(i, j))}});
  return out;
}

/// Vector in ambient components, as {"k": literal}.
inline Json vector(const FrameVectorField &v) { return detail::sparse_json(v); }

inline Json affine(const AffineForm &f) {
  Json j = detail::affine_json(f);
  j["form"] = to_string(f);
  return j;
}

inline Json curvature(const CurvaturePackage &p) {
  return Json{{"frame", detail::index_list_json(p.frame)},
              {"connection", sparse(p.gamma, p.frame)},
              {"riemann", sparse(p.riemann, p.frame)},
              {"ricci", sparse(p.ricci, p.frame)},
              {"scalar", scalar(p.scalar)}};
}

inline Json axioms(const CurvatureAxioms &a) {
  return Json{{"torsion_free", a.torsion_free},
              {"metric_compatible", a.metric_compatible},
              {"antisymmetric", a.antisymmetric},
              {"first_bianchi", a.first_bianchi},
              {"pair_symmetric", a.pair_symmetric}};
}

inline Json flags(const StructuralFlags &f) {
  return Json{{"vertical_parallel", f.vertical_parallel},
              {"horizontal_parallel", f.horizontal_parallel},
              {"horizontal_integrable", f.horizontal_integrable},
              {"vertical_integrable", f.vertical_integrable},
              {"fibers_minimal", f.fibers_minimal},
              {"fibers_totally_umbilical", f.fibers_totally_umbilical},
              {"fibers_totally_geodesic", f.fibers_totally_geodesic},
              {"horizontal_isometry", f.horizontal_isometry}};
}

inline Json residual(const IdentityResidual &r) {
  Json j{{"identity", r.identity},  {"reading", r.reading},   {"asserted", r.asserted},
         {"evaluated", r.evaluated}, {"tuples", r.tuples},     {"nonzero", r.nonzero},
         {"max_abs", scalar(r.max_abs)}};
  if (!r.worst.empty()) {
    Json w = Json::array();
    for (auto i : r.worst) w.push_back(i + 1);
    j["worst"] = std::move(w);
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json solution(const SolitonSolution &s) {
  return Json{{"lambda", scalar(s.lambda)},
              {"mu", scalar(s.mu)},
              {"classification", to_string(s.classification)},
              {"exact", s.exact},
              {"residual_max", scalar(s.residual_max)},
              {"mu_by_convention", s.mu_by_convention},
              {"type", s.special_type}};
}

inline Json affine_solution(const AffineSolution &a) {
  return Json{{"lambda", affine(a.lambda)},
              {"mu", affine(a.mu)},
              {"exact", a.exact},
              {"worst_residual", scalar(a.worst_residual)}};
}

inline Json harmonic(const HarmonicReport &h) {
  Json j{{"divergence_v", scalar(h.divergence_v)},
         {"laplacian_f", scalar(h.laplacian_f)},
         {"short_formula_value", scalar(h.short_formula_value)},
         {"trace_formula_value", scalar(h.trace_formula_value)},
         {"match", h.match},
         {"identity_holds", h.identity_holds},
         {"solve_exact", h.solve_exact}};
  if (!h.warning.empty()) j["warning"] = h.warning;
  return j;
}

inline Json theorem(const TheoremCheck &c) {
  Json hyp = Json::object();
  for (const auto &[name, ok] : c.hypotheses) hyp[name] = ok;
  Json j{{"name", c.name}, {"hypotheses", std::move(hyp)}, {"hypotheses_hold", c.hypotheses_hold}};
  j["conclusion"] = c.conclusion ? Json(*c.conclusion) : Json();
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

}  // namespace report

// ---------------------------------------------------------------------------
// Parsing reports back, for round-trip checks

namespace report {

inline Scalar read_scalar(const Json &j) { return parse_scalar(j.get<std::string>()); }

inline Matrix read_matrix(const Json &sparse_list, const std::vector<std::size_t> &frame) {
  Matrix m(frame.size(), frame.size());
  for (const auto &e : sparse_list) {
    const auto local = [&](std::size_t ambient) {
      const auto it = std::find(frame.begin(), frame.end(), ambient - 1);
      if (it == frame.end()) throw Error("index outside the frame");
      return static_cast<std::size_t>(it - frame.begin());
    };
    m(local(e["indices"][0].get<std::size_t>()), local(e["indices"][1].get<std::size_t>())) = read_scalar(e["value"]);
  }
  return m;
}

template <std::size_t Rank>
Tensor<Rank> read_tensor(const Json &sparse_list, const std::vector<std::size_t> &frame) {
  Tensor<Rank> t(frame.size());
  for (const auto &e : sparse_list) {
    std::array<std::size_t, Rank> idx{};
    for (std::size_t a = 0; a < Rank; ++a) {
      const auto ambient = e["indices"][a].get<std::size_t>() - 1;
      const auto it = std::find(frame.begin(), frame.end(), ambient);
      if (it == frame.end()) throw Error("index outside the frame");
      idx[a] = static_cast<std::size_t>(it - frame.begin());
    }
    std::apply([&](auto... i) -> Scalar & { return t(i...); }, idx) = read_scalar(e["value"]);
  }
  return t;
}

}  // namespace report

}  // namespace ryssub
