#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmiv/petri.hpp"

// Brute-force P-invariant oracle and the incidence-class enumerator used by
// the oracle-equivalence checks.
namespace hmiv::testkit::petri_oracle {

using Vec = std::vector<std::int64_t>;
using petri::IntMatrix;

inline std::uint32_t support(const Vec& y) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i]) m |= 1u << i;
  return m;
}

inline bool strictly_inside(std::uint32_t a, std::uint32_t b) { return a != b && (a & b) == a; }

// Every nonzero y in [0, bound]^places with y^T C = 0, odometer order
// (first place fastest).
inline std::vector<Vec> null_space_solutions(const IntMatrix& c, std::size_t places, int bound) {
  const std::size_t cols = places && !c.empty() ? c[0].size() : 0;
  std::vector<Vec> out;
  Vec y(places, 0);
  std::vector<std::int64_t> dot(cols, 0);
  while (true) {
    std::size_t p = 0;
    while (p < places && y[p] == bound) {
      for (std::size_t t = 0; t < cols; ++t) dot[t] -= bound * c[p][t];
      y[p++] = 0;
    }
    if (p == places) break;
    ++y[p];
    for (std::size_t t = 0; t < cols; ++t) dot[t] += c[p][t];
    if (std::all_of(dot.begin(), dot.end(), [](std::int64_t v) { return v == 0; })) out.push_back(y);
  }
  return out;
}

// Minimal-support solutions within the box, each the gcd-1 generator of
// its support, in descending lexicographic order.
inline std::vector<Vec> brute_force_invariants(const IntMatrix& c, std::size_t places, int bound,
                                               std::vector<Vec>* all = nullptr) {
  auto sols = null_space_solutions(c, places, bound);
  std::vector<Vec> out;
  for (const auto& y : sols) {
    const auto s = support(y);
    bool minimal = true;
    for (const auto& z : sols)
      if (strictly_inside(support(z), s)) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    std::int64_t g = 0;
    for (auto v : y) g = std::gcd(g, v);
    if (g != 1) continue;  // a multiple of the generator, which is also in the box
    out.push_back(y);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  if (all) *all = std::move(sols);
  return out;
}

// Compares the Farkas result with the box oracle. Returns an empty string
// on agreement, otherwise a description of the first discrepancy.
//   - every Farkas vector solves y^T C = 0, has gcd 1, and no solution in
//     the box nor another Farkas vector has a strictly smaller support;
//   - Farkas vectors with entries <= bound are exactly the oracle vectors,
//     except oracle supports shown non-minimal by a Farkas vector whose
//     coefficients leave the box.
inline std::string compare(const IntMatrix& c, std::size_t places, const std::vector<Vec>& farkas, int bound = 6) {
  std::vector<Vec> sols;
  const auto oracle = brute_force_invariants(c, places, bound, &sols);
  auto fmt = [](const Vec& y) {
    std::string s = "(";
    for (std::size_t i = 0; i < y.size(); ++i) s += (i ? "," : "") + std::to_string(y[i]);
    return s + ")";
  };
  if (!std::is_sorted(farkas.begin(), farkas.end(), std::greater<>())) return "farkas output not in descending order";
  const std::size_t cols = places && !c.empty() ? c[0].size() : 0;
  for (const auto& f : farkas) {
    if (f.size() != places) return "wrong length " + fmt(f);
    std::int64_t g = 0;
    for (auto v : f) {
      if (v < 0) return "negative entry " + fmt(f);
      g = std::gcd(g, v);
    }
    if (g != 1) return "not gcd-reduced " + fmt(f);
    for (std::size_t t = 0; t < cols; ++t) {
      std::int64_t d = 0;
      for (std::size_t p = 0; p < places; ++p) d += f[p] * c[p][t];
      if (d) return "not an invariant " + fmt(f);
    }
    for (const auto& z : sols)
      if (strictly_inside(support(z), support(f))) return "non-minimal support " + fmt(f) + " contains " + fmt(z);
    for (const auto& h : farkas)
      if (strictly_inside(support(h), support(f))) return "non-minimal support " + fmt(f) + " contains " + fmt(h);
  }
  for (const auto& f : farkas)
    if (*std::max_element(f.begin(), f.end()) <= bound && !std::binary_search(oracle.begin(), oracle.end(), f, std::greater<>()))
      return "farkas vector missing from oracle " + fmt(f);
  for (const auto& o : oracle) {
    if (std::binary_search(farkas.begin(), farkas.end(), o, std::greater<>())) continue;
    const bool refuted = std::any_of(farkas.begin(), farkas.end(),
                                     [&](const Vec& f) { return strictly_inside(support(f), support(o)); });
    if (!refuted) return "oracle vector missing from farkas " + fmt(o);
  }
  return {};
}

// Incidence columns with entries in [-2, 2] up to sign and positive
// scaling: nonzero, first nonzero entry positive, entries not all even.
inline std::vector<Vec> directions(std::size_t places) {
  std::vector<Vec> out;
  Vec v(places, -2);
  while (true) {
    const auto first = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
    const bool odd = std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x % 2 != 0; });
    if (first != v.end() && *first > 0 && odd) out.push_back(v);
    std::size_t i = 0;
    while (i < places && v[i] == 2) v[i++] = -2;
    if (i == places) break;
    ++v[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct ClassStats {
  std::uint64_t classes = 0;
  std::uint64_t out_of_box = 0;  // Farkas vectors with an entry above the box
};

// Calls f(C) once per set of at most max_cols distinct directions, up to
// permutation of places (the lexicographically least member of each orbit).
inline void for_each_incidence_class(std::size_t places, std::size_t max_cols,
                                     const std::function<void(const IntMatrix&)>& f) {
  const auto dirs = directions(places);
  const std::size_t n = dirs.size();
  std::vector<std::size_t> perm(places);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  auto index_of = [&](const Vec& v) {
    return static_cast<std::size_t>(std::lower_bound(dirs.begin(), dirs.end(), v) - dirs.begin());
  };
  // image[k][d]: direction index of dirs[d] with places permuted by perms[k].
  std::vector<std::vector<std::size_t>> image(perms.size(), std::vector<std::size_t>(n));
  for (std::size_t k = 0; k < perms.size(); ++k)
    for (std::size_t d = 0; d < n; ++d) {
      Vec w(places);
      for (std::size_t p = 0; p < places; ++p) w[perms[k][p]] = dirs[d][p];
      const auto first = std::find_if(w.begin(), w.end(), [](std::int64_t x) { return x != 0; });
      if (*first < 0)
        for (auto& x : w) x = -x;
      image[k][d] = index_of(w);
    }

  std::vector<std::size_t> combo;
  std::vector<std::size_t> img;
  IntMatrix c;
  auto emit = [&] {
    img.resize(combo.size());
    for (std::size_t k = 1; k < perms.size(); ++k) {
      for (std::size_t i = 0; i < combo.size(); ++i) img[i] = image[k][combo[i]];
      std::sort(img.begin(), img.end());
      if (img < combo) return;
    }
    c.assign(places, std::vector<std::int64_t>(combo.size()));
    for (std::size_t j = 0; j < combo.size(); ++j)
      for (std::size_t p = 0; p < places; ++p) c[p][j] = dirs[combo[j]][p];
    f(c);
  };
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    emit();
    if (combo.size() == max_cols) return;
    for (std::size_t d = start; d < n; ++d) {
      combo.push_back(d);
      rec(d + 1);
      combo.pop_back();
    }
  };
  rec(0);
}

// Net with 1..4 places, 0..4 transitions, arc weights <= 2 and initial
// tokens <= 2; every transition has at least one arc.
inline petri::PetriNet random_net(std::mt19937_64& rng) {
  petri::PetriNet n;
  n.name = "R";
  const std::size_t places = 1 + rng() % 4, transitions = rng() % 5;
  for (std::size_t p = 0; p < places; ++p) {
    n.places.push_back("p" + std::to_string(p));
    n.initial.push_back(static_cast<std::int64_t>(rng() % 3));
  }
  for (std::size_t t = 0; t < transitions; ++t) {
    petri::NetTransition tr;
    tr.id = "t" + std::to_string(t);
    while (tr.inputs.empty() && tr.outputs.empty())
      for (std::size_t p = 0; p < places; ++p) {
        const auto wi = static_cast<std::int64_t>(rng() % 3), wo = static_cast<std::int64_t>(rng() % 3);
        if (wi) tr.inputs.emplace_back(n.places[p], wi);
        if (wo) tr.outputs.emplace_back(n.places[p], wo);
      }
    n.transitions.push_back(std::move(tr));
  }
  if (!petri::resolve_net(n).empty()) throw std::logic_error("generated net does not resolve");
  return n;
}

}  // namespace hmiv::testkit::petri_oracle
