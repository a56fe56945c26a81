#pragma once

// Comparison of engine results against the claimed values carried by a manifest.
// Every claimed value yields exactly one entry; mismatches are data.

#include "ryssub/report.hpp"

#include <functional>

namespace ryssub {

struct LedgerEntry {
  std::string quantity;  // manifest/domain/item
  Json computed;         // null when the computation failed
  Json claimed;
  bool match = false;
  std::string note;
};

struct Ledger {
  std::string manifest;
  std::vector<LedgerEntry> entries;

  std::size_t matches() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto &e) { return e.match; }));
  }
  std::size_t mismatches() const { return entries.size() - matches(); }
};

namespace detail {

/// Manifest note for `item`: exact key first, then the longest key that prefixes it.
inline std::string claim_note(const DomainClaims &c, const std::string &item) {
  std::string best, key;
  for (const auto &[k, v] : c.notes)
    if (item.compare(0, k.size(), k) == 0 && k.size() > key.size() &&
        (k.size() == item.size() || item[k.size()] == '/' || item[k.size()] == '['))
      key = k, best = v;
  return best;
}

inline std::string frame_name(std::size_t ambient) { return "E" + std::to_string(ambient + 1); }

inline std::size_t local_index(const std::vector<std::size_t> &frame, std::size_t ambient) {
  const auto it = std::find(frame.begin(), frame.end(), ambient);
  if (it == frame.end()) throw Error(frame_name(ambient) + " is not in this domain");
  return static_cast<std::size_t>(it - frame.begin());
}

/// Ambient vector from local components.
inline FrameVectorField lift(const std::vector<Scalar> &local, const std::vector<std::size_t> &frame, std::size_t n) {
  FrameVectorField v(n);
  for (std::size_t a = 0; a < frame.size(); ++a) v[frame[a]] = local[a];
  return v;
}

class LedgerBuilder {
public:
  LedgerBuilder(Ledger &ledger, std::string prefix, const DomainClaims &claims)
      : ledger_(ledger), prefix_(std::move(prefix)), claims_(claims) {}

  /// `compute` returns the engine value; an exception becomes the entry's note.
  void add(const std::string &item, const Json &claimed, const std::function<Json()> &compute) {
    LedgerEntry e;
    e.quantity = prefix_ + item;
    e.claimed = claimed;
    const std::string note = claim_note(claims_, item);
    try {
      e.computed = compute();
      e.match = e.computed == e.claimed;
      e.note = note.empty() ? (e.match ? "" : "computed value differs from the claimed value") : note;
    } catch (const std::exception &ex) {
      e.computed = nullptr;
      e.match = false;
      e.note = std::string("not computed: ") + ex.what();
      if (!note.empty()) e.note += "; " + note;
    }
    ledger_.entries.push_back(std::move(e));
  }

private:
  Ledger &ledger_;
  std::string prefix_;
  const DomainClaims &claims_;
};

}  // namespace detail

inline Ledger run_verify(const Manifest &m) {
  Ledger ledger;
  ledger.manifest = m.name;
  std::optional<FrameManifold> frame;
  std::optional<SubmersionSplit> split;
  std::string setup_error;
  try {
    frame = build_frame(m);
    split = build_split(m, *frame);
  } catch (const std::exception &e) {
    setup_error = e.what();
  }
  auto need_frame = [&]() -> const FrameManifold & {
    if (!frame) throw Error(setup_error);
    return *frame;
  };

  for (const auto &[domain, c] : m.claimed) {
    detail::LedgerBuilder add(ledger, m.name + "/" + to_string(domain) + "/", c);
    const Domain d = domain;
    const std::size_t n = m.dimension;

    // Domain geometry, computed once on first use.
    std::optional<CurvaturePackage> geom_cache;
    auto geom = [&]() -> const CurvaturePackage & {
      if (geom_cache) return *geom_cache;
      const FrameManifold &fm = need_frame();
      const CurvaturePackage total = curvature(fm);
      if (d == Domain::total) {
        geom_cache = total;
      } else {
        if (!split) throw Error("domain " + to_string(d) + " needs a split");
        if (d == Domain::fiber)
          geom_cache = fiber_geometry(fm, total.gamma, *split);
        else
          geom_cache = base_geometry(fm, total, oneill_tensors(fm, total.gamma, *split), *split);
      }
      return *geom_cache;
    };

    if (c.ricci) add.add("ricci", detail::matrix_json(*c.ricci), [&] { return detail::matrix_json(geom().ricci); });
    if (c.scalar) add.add("scalar", to_string(*c.scalar), [&] { return Json(to_string(geom().scalar)); });

    for (const auto &x : c.connection) {
      const std::string item = "connection(" + detail::frame_name(x.i) + ")" + detail::frame_name(x.j);
      add.add(item, detail::sparse_json(x.value), [&] {
        const auto &g = geom();
        const std::size_t i = detail::local_index(g.frame, x.i), j = detail::local_index(g.frame, x.j);
        std::vector<Scalar> local(g.dim());
        for (std::size_t k = 0; k < g.dim(); ++k) local[k] = g.gamma(i, j, k);
        return detail::sparse_json(detail::lift(local, g.frame, n));
      });
    }

    for (const auto &x : c.riemann) {
      const std::string item = "riemann(" + detail::frame_name(x.i) + "," + detail::frame_name(x.j) + ")" +
                               detail::frame_name(x.k);
      add.add(item, detail::sparse_json(x.value), [&] {
        const auto &g = geom();
        const std::size_t i = detail::local_index(g.frame, x.i), j = detail::local_index(g.frame, x.j),
                          k = detail::local_index(g.frame, x.k);
        std::vector<Scalar> local(g.dim());
        for (std::size_t l = 0; l < g.dim(); ++l) local[l] = g.riemann(i, j, k, l);
        return detail::sparse_json(detail::lift(local, g.frame, n));
      });
    }

    if (!c.lambda_affine && !c.mu_affine && c.cases.empty()) continue;

    // Soliton claims use the first run on this domain.
    const SolitonRun *run = run_for(m, d);
    std::optional<SolitonSystem> sys_cache;
    auto sys = [&]() -> const SolitonSystem & {
      if (sys_cache) return *sys_cache;
      if (!run) throw Error("no soliton run on domain " + to_string(d));
      const SolitonParams p{run->alpha, run->beta, field(m, run->potential), field(m, run->xi), d};
      sys_cache = build_system(need_frame(), split, p, c.solve_with_claimed ? c.tensors() : ClaimedTensors{});
      return *sys_cache;
    };
    std::optional<AffineSolution> affine_cache;
    auto affine = [&]() -> const AffineSolution & {
      if (!affine_cache) affine_cache = soliton_affine_form(sys());
      if (!affine_cache->exact) throw Error("affine form is not exact");
      return *affine_cache;
    };
    if (c.lambda_affine)
      add.add("lambda_affine", detail::affine_json(*c.lambda_affine), [&] { return detail::affine_json(affine().lambda); });
    if (c.mu_affine)
      add.add("mu_affine", detail::affine_json(*c.mu_affine), [&] { return detail::affine_json(affine().mu); });

    for (std::size_t a = 0; a < c.cases.size(); ++a) {
      const CaseClaim &cc = c.cases[a];
      const std::string item = "cases[" + std::to_string(a) + "]/";
      auto solve = [&] {
        const SolitonSolution s = soliton_solve(sys(), cc.alpha, cc.beta);
        if (!s.exact) throw Error("solve is not exact (residual " + to_string(s.residual_max) + ")");
        return s;
      };
      if (cc.lambda) add.add(item + "lambda", to_string(*cc.lambda), [&] { return Json(to_string(solve().lambda)); });
      if (cc.mu) add.add(item + "mu", to_string(*cc.mu), [&] { return Json(to_string(solve().mu)); });
      if (cc.classification)
        add.add(item + "classification", to_string(*cc.classification), [&] {
          // The label is judged against the sign of the stated lambda.
          return Json(to_string(classify(cc.lambda ? *cc.lambda : solve().lambda)));
        });
    }
  }
  return ledger;
}

inline Json ledger_to_json(const Ledger &l) {
  Json entries = Json::array();
  for (const auto &e : l.entries)
    entries.push_back(
        Json{{"quantity", e.quantity}, {"computed", e.computed}, {"claimed", e.claimed}, {"match", e.match}, {"note", e.note}});
  return Json{{"manifest", l.manifest},
              {"entries", std::move(entries)},
              {"summary", {{"entries", l.entries.size()}, {"matches", l.matches()}, {"mismatches", l.mismatches()}}}};
}

inline const std::vector<std::string> &bundled_manifest_names() {
  static const std::vector<std::string> names{"abelian3", "heisenberg3", "example51", "example52"};
  return names;
}

/// Ledgers of every bundled manifest under `dir`, in a fixed order.
inline Json bundled_ledger(const std::filesystem::path &dir) {
  Json ledgers = Json::array();
  std::size_t total = 0, matches = 0;
  for (const auto &name : bundled_manifest_names()) {
    const Ledger l = run_verify(load_manifest(dir / (name + ".json")));
    total += l.entries.size();
    matches += l.matches();
    ledgers.push_back(ledger_to_json(l));
  }
  return Json{{"ledgers", std::move(ledgers)},
              {"summary", {{"entries", total}, {"matches", matches}, {"mismatches", total - matches}}}};
}

inline std::string dump_report(const Json &j) { return j.dump(2) + "\n"; }

}  // namespace ryssub
