#pragma once

// The hyperbolic quadric Q+(5,q) on V = E^2 with Q(u,v) = T(uv).
//
// Projective points are stored in a canonical form: N(u) = 1, or u = 0 and
// N(v) = 1. Cubing is a bijection of F* when q != 1 mod 3, so the scalar is
// unique. Points are sorted by (u.index, v.index).

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "clq/error.hpp"
#include "clq/field_tower.hpp"
#include "clq/parallel.hpp"
#include "clq/report.hpp"
#include "clq/special_set.hpp"

namespace clq {

struct QuadricPoint {
  Element u, v;
  friend constexpr auto operator<=>(const QuadricPoint&, const QuadricPoint&) = default;
};

enum class MapTag { c, z, e, o, scale_v };

inline const char* to_string(MapTag m) {
  switch (m) {
    case MapTag::c: return "c";
    case MapTag::z: return "z";
    case MapTag::e: return "e";
    case MapTag::o: return "o";
    case MapTag::scale_v: return "scale_v";
  }
  return "?";
}

/// (u,v) -> (mu u, mu^-1 v), (u, omega^4 v), (u^q, v^q), (v, omega u) or
/// (u, omega^k v) for scale_v.
struct IsometryMap {
  MapTag tag = MapTag::c;
  std::int64_t k = 1;

  static IsometryMap c() { return {MapTag::c, 1}; }
  static IsometryMap z() { return {MapTag::z, 1}; }
  static IsometryMap e() { return {MapTag::e, 1}; }
  static IsometryMap o() { return {MapTag::o, 1}; }
  static IsometryMap scale_v(std::int64_t k) { return {MapTag::scale_v, k}; }
};

using Permutation = std::vector<std::uint32_t>;

class Quadric {
 public:
  static constexpr std::uint32_t kAbsent = 0xffffffffu;

  explicit Quadric(const FieldTower& tower) : t_(&tower) {
    require_admissible(tower);
    const std::uint32_t q = tower.q();
    Q_ = tower.plane_order();
    // inverse of 3 modulo q-1
    for (std::uint32_t i = 1; i < q - 1; ++i)
      if ((3 * i) % (q - 1) == 1) {
        inv3_ = i;
        break;
      }
    std::vector<Element> trace_zero;
    for (std::uint32_t i = 0; i < tower.size(); ++i)
      if (tower.trace(Element{i}).is_zero()) trace_zero.push_back(Element{i});

    std::vector<Element> norm_one;
    for (std::uint32_t k = 0; k < tower.order(); k += q - 1) norm_one.push_back(tower.exp(k));
    std::sort(norm_one.begin(), norm_one.end());

    points_.reserve(std::size_t{Q_} * (q * q + 1));
    block_start_.assign(tower.size(), kAbsent);
    block_start_[0] = 0;
    for (Element v : norm_one) points_.push_back({tower.zero(), v});
    std::vector<Element> vs;
    for (Element u : norm_one) {
      block_start_[u.index] = static_cast<std::uint32_t>(points_.size());
      vs.clear();
      const Element ui = tower.inv(u);
      for (Element y : trace_zero) vs.push_back(tower.mul(y, ui));
      std::sort(vs.begin(), vs.end());
      for (Element v : vs) points_.push_back({u, v});
    }
    block_len_u0_ = Q_;
    block_len_ = q * q;
    lu_.resize(points_.size());
    lv_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      lu_[i] = points_[i].u.is_zero() ? kNoLog : tower.log(points_[i].u);
      lv_[i] = points_[i].v.is_zero() ? kNoLog : tower.log(points_[i].v);
    }
  }

  static constexpr std::uint32_t kNoLog = 0xffffffffu;
  /// Discrete logs of the coordinates, kNoLog for zero.
  std::uint32_t log_u(std::uint32_t i) const { return lu_[i]; }
  std::uint32_t log_v(std::uint32_t i) const { return lv_[i]; }

  const FieldTower& tower() const { return *t_; }
  std::size_t size() const { return points_.size(); }
  const QuadricPoint& point(std::uint32_t i) const { return points_[i]; }
  const std::vector<QuadricPoint>& points() const { return points_; }
  std::uint32_t plane_order() const { return Q_; }

  bool on_quadric(Element u, Element v) const { return t_->trace(t_->mul(u, v)).is_zero(); }

  /// Unique representative of the F*-class of (u,v).
  QuadricPoint canonicalize(Element u, Element v) const {
    const Element lead = u.is_zero() ? v : u;
    if (lead.is_zero()) throw Error(ErrorCode::NotOnQuadric, "zero vector");
    const std::int64_t k = t_->log(lead) % (t_->q() - 1);
    const std::int64_t m = detail::mod(-k * inv3_, t_->q() - 1);
    const std::int64_t lam = m * Q_;
    auto scale = [&](Element x) { return x.is_zero() ? x : t_->exp(static_cast<std::int64_t>(t_->log(x)) + lam); };
    return {scale(u), scale(v)};
  }

  /// Index of the projective point (u,v), or kAbsent if not on the quadric.
  std::uint32_t index_of(Element u, Element v) const {
    if (!on_quadric(u, v)) return kAbsent;
    const QuadricPoint c = canonicalize(u, v);
    const std::uint32_t start = block_start_[c.u.index];
    if (start == kAbsent) return kAbsent;
    const std::uint32_t len = c.u.is_zero() ? block_len_u0_ : block_len_;
    const auto first = points_.begin() + start;
    const auto it = std::lower_bound(first, first + len, c);
    if (it == first + len || *it != c) return kAbsent;
    return static_cast<std::uint32_t>(it - points_.begin());
  }
  std::uint32_t index_of(const QuadricPoint& p) const { return index_of(p.u, p.v); }

  /// B((u1,v1),(u2,v2)) = T(u1 v2) + T(v1 u2).
  Element polar(const QuadricPoint& a, const QuadricPoint& b) const {
    return t_->add(t_->trace(t_->mul(a.u, b.v)), t_->trace(t_->mul(a.v, b.u)));
  }
  bool collinear(std::uint32_t i, std::uint32_t j) const {
    const Element a = (lu_[i] == kNoLog || lv_[j] == kNoLog) ? Element{} : t_->trace_of_log(lu_[i] + lv_[j]);
    const Element b = (lv_[i] == kNoLog || lu_[j] == kNoLog) ? Element{} : t_->trace_of_log(lv_[i] + lu_[j]);
    return a == t_->neg(b);
  }

  QuadricPoint apply(const IsometryMap& m, const QuadricPoint& p) const {
    const FieldTower& t = *t_;
    switch (m.tag) {
      case MapTag::c: return canonicalize(t.mul(t.mu(), p.u), t.div(p.v, t.mu()));
      case MapTag::z: return canonicalize(p.u, t.mul(t.pow(t.omega(), 4), p.v));
      case MapTag::e: return canonicalize(t.frobenius(p.u), t.frobenius(p.v));
      case MapTag::o: return canonicalize(p.v, t.mul(t.omega(), p.u));
      case MapTag::scale_v: return canonicalize(p.u, t.mul(t.pow(t.omega(), m.k), p.v));
    }
    throw Error(ErrorCode::BadFlag, "unknown map");
  }

  Permutation permutation(const IsometryMap& m) const {
    Permutation out(points_.size());
    for (std::uint32_t i = 0; i < points_.size(); ++i) {
      const QuadricPoint img = apply(m, points_[i]);
      out[i] = index_of(img);
      if (out[i] == kAbsent) throw Error(ErrorCode::NotOnQuadric, std::string("image under ") + to_string(m.tag));
    }
    return out;
  }

  bool in_pi1(std::uint32_t i) const { return points_[i].v.is_zero(); }
  bool in_pi2(std::uint32_t i) const { return points_[i].u.is_zero(); }

 private:
  const FieldTower* t_;
  std::uint32_t Q_ = 0;
  std::int64_t inv3_ = 0;
  std::uint32_t block_len_ = 0, block_len_u0_ = 0;
  std::vector<QuadricPoint> points_;
  std::vector<std::uint32_t> block_start_;
  std::vector<std::uint32_t> lu_, lv_;
};

/// Orbit label of a point off pi1 u pi2: w = uv = omega^j a^2 with N(a) = 1,
/// a in S. For the group <c,z> only j mod 4 matters.
struct OrbitKey {
  std::uint32_t j = 0;  // omega exponent, mod q-1
  Element a;
};

inline OrbitKey orbit_key(const Quadric& Qd, const QuadricPoint& p) {
  const FieldTower& t = Qd.tower();
  if (p.u.is_zero() || p.v.is_zero()) throw Error(ErrorCode::OrbitMismatch, "orbit_key on a generator point");
  const Element w = t.mul(p.u, p.v);
  const std::uint32_t qm1 = t.q() - 1;
  const std::uint32_t n = t.subfield_log(t.norm(w));
  std::uint32_t inv3 = 0;
  for (std::uint32_t i = 1; i < qm1; ++i)
    if ((3 * i) % qm1 == 1) inv3 = i;
  const std::uint32_t j = static_cast<std::uint32_t>((std::uint64_t{n} * inv3) % qm1);
  const Element lam = t.pow(t.omega(), j);
  const Element a2 = t.div(w, lam);
  // a2 lies in <mu>, of odd order Q; its square root there is a2^((Q+1)/2)
  const Element a = t.pow(a2, (t.plane_order() + 1) / 2);
  return {j, a};
}

enum class OrbitGroup { c_only, full_G };

/// Orbits in a fixed order: pi1, pi2, then the remaining orbits by
/// (omega exponent class, position of a in S).
struct OrbitTable {
  OrbitGroup group = OrbitGroup::full_G;
  std::vector<std::uint32_t> orbit_of;
  std::vector<std::vector<std::uint32_t>> members;
  /// For orbits >= 2: (j class, position in S).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> keys;

  std::size_t count() const { return members.size(); }
};

inline OrbitTable compute_orbits(const Quadric& Qd, const SpecialSet& S, OrbitGroup group) {
  const FieldTower& t = Qd.tower();
  std::vector<Permutation> gens{Qd.permutation(IsometryMap::c())};
  if (group == OrbitGroup::full_G) gens.push_back(Qd.permutation(IsometryMap::z()));
  const std::uint32_t n = static_cast<std::uint32_t>(Qd.size());
  const std::uint32_t jclasses = group == OrbitGroup::full_G ? 4 : t.q() - 1;
  const std::uint32_t slots = 2 + jclasses * static_cast<std::uint32_t>(S.size());

  OrbitTable tab;
  tab.group = group;
  tab.orbit_of.assign(n, Quadric::kAbsent);
  tab.members.assign(slots, {});
  tab.keys.assign(slots, {0, 0});
  std::vector<std::uint32_t> queue;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (tab.orbit_of[start] != Quadric::kAbsent) continue;
    std::uint32_t slot;
    if (Qd.in_pi1(start)) {
      slot = 0;
    } else if (Qd.in_pi2(start)) {
      slot = 1;
    } else {
      const OrbitKey k = orbit_key(Qd, Qd.point(start));
      const std::size_t pos = S.position(k.a);
      if (pos == S.size()) throw Error(ErrorCode::OrbitMismatch, "orbit key outside S");
      const std::uint32_t jc = k.j % jclasses;
      slot = 2 + jc * static_cast<std::uint32_t>(S.size()) + static_cast<std::uint32_t>(pos);
      tab.keys[slot] = {jc, static_cast<std::uint32_t>(pos)};
    }
    if (!tab.members[slot].empty()) throw Error(ErrorCode::OrbitMismatch, "two orbits share a key");
    queue.assign(1, start);
    tab.orbit_of[start] = slot;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (const auto& g : gens) {
        const std::uint32_t nb = g[queue[h]];
        if (tab.orbit_of[nb] == Quadric::kAbsent) {
          tab.orbit_of[nb] = slot;
          queue.push_back(nb);
        }
      }
    std::sort(queue.begin(), queue.end());
    tab.members[slot] = queue;
  }
  // the formula key must agree on every member, not just the seed
  for (std::uint32_t slot = 2; slot < slots; ++slot) {
    if (tab.members[slot].empty()) throw Error(ErrorCode::OrbitMismatch, "missing orbit " + std::to_string(slot));
    for (std::uint32_t i : tab.members[slot]) {
      const OrbitKey k = orbit_key(Qd, Qd.point(i));
      if (k.j % jclasses != tab.keys[slot].first || S.position(k.a) != tab.keys[slot].second)
        throw Error(ErrorCode::OrbitMismatch, "orbit key not constant on orbit " + std::to_string(slot));
    }
  }
  const std::size_t expect_size =
      std::size_t{Qd.plane_order()} * (group == OrbitGroup::full_G ? (t.q() - 1) / 4 : 1);
  if (tab.members[0].size() != Qd.plane_order() || tab.members[1].size() != Qd.plane_order())
    throw Error(ErrorCode::OrbitMismatch, "generator orbits have wrong size");
  for (std::uint32_t slot = 2; slot < slots; ++slot)
    if (tab.members[slot].size() != expect_size)
      throw Error(ErrorCode::OrbitMismatch, "orbit " + std::to_string(slot) + " has size " +
                                                std::to_string(tab.members[slot].size()));
  return tab;
}

inline std::uint32_t orbit_slot(const OrbitTable&, std::uint32_t jclass, std::uint32_t a_pos,
                                std::size_t s_size) {
  return 2 + jclass * static_cast<std::uint32_t>(s_size) + a_pos;
}

/// Structural properties of the model: point count, perp sizes, the
/// semiregularity of <c>, and behaviour of the four named maps.
inline std::vector<CheckReport> verify_quadric_model(const Quadric& Qd, unsigned threads = 1,
                                                     std::uint64_t perp_budget = 40'000'000) {
  const FieldTower& t = Qd.tower();
  const std::uint64_t q = t.q();
  const std::uint32_t n = static_cast<std::uint32_t>(Qd.size());
  std::vector<CheckReport> out;
  {
    CheckReport r("point_count", n);
    r.expect(n == (q * q + 1) * (q * q + q + 1), [&] { return "got " + std::to_string(n); });
    std::uint32_t pi1 = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto& p = Qd.point(i);
      r.expect(Qd.on_quadric(p.u, p.v) && Qd.canonicalize(p.u, p.v) == p && Qd.index_of(p) == i,
               [&] { return "point " + std::to_string(i); });
      if (i > 0) r.expect(Qd.point(i - 1) < p, [&] { return "order at " + std::to_string(i); });
      pi1 += Qd.in_pi1(i);
    }
    r.expect(pi1 == Qd.plane_order(), [&] { return "pi1 has " + std::to_string(pi1); });
    out.push_back(r);
  }
  {
    // |p^perp| is the same for every point; sampled when n^2 is too large
    CheckReport r("perp_size_constant");
    const std::uint64_t want = q * q * q + 2 * q * q + q + 1;
    const std::uint32_t stride = std::uint64_t{n} * n <= perp_budget ? 1 : static_cast<std::uint32_t>(std::uint64_t{n} * n / perp_budget + 1);
    if (stride > 1) r.scope = "sampled(stride=" + std::to_string(stride) + ")";
    const std::size_t chunks = chunk_count(n, threads);
    std::vector<CheckReport> parts(chunks);
    parallel_chunks(n, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
      for (std::size_t i = b; i < e; i += stride) {
        std::uint64_t cnt = 0;
        for (std::uint32_t j = 0; j < n; ++j) cnt += Qd.collinear(static_cast<std::uint32_t>(i), j);
        parts[c].expect(cnt == want, [&] { return "point " + std::to_string(i) + " perp " + std::to_string(cnt); });
      }
    });
    for (auto& pr : parts) r.merge(pr);
    r.details["perp_size"] = want;
    r.domain_size = n;
    out.push_back(r);
  }
  {
    CheckReport r("c_semiregular", n);
    const Permutation c = Qd.permutation(IsometryMap::c());
    for (std::uint32_t i = 0; i < n; ++i) {
      std::uint32_t x = c[i];
      std::uint32_t len = 1;
      while (x != i) {
        x = c[x];
        ++len;
      }
      r.expect(len == Qd.plane_order(), [&] { return "point " + std::to_string(i) + " c-cycle " + std::to_string(len); });
    }
    out.push_back(r);
  }
  {
    CheckReport r("maps_preserve_collinearity");
    for (auto m : {IsometryMap::c(), IsometryMap::z(), IsometryMap::e(), IsometryMap::o()}) {
      const Permutation pm = Qd.permutation(m);
      std::vector<char> seen(n, 0);
      for (std::uint32_t i = 0; i < n; ++i) {
        r.expect(!seen[pm[i]], [&] { return std::string(to_string(m.tag)) + " not injective"; });
        seen[pm[i]] = 1;
      }
      // collinearity on a deterministic sample of pairs
      for (std::uint32_t i = 0; i < n; i += std::max<std::uint32_t>(1, n / 200))
        for (std::uint32_t j = 0; j < n; j += std::max<std::uint32_t>(1, n / 200))
          r.expect(Qd.collinear(i, j) == Qd.collinear(pm[i], pm[j]),
                   [&] { return std::string(to_string(m.tag)) + " pair " + std::to_string(i) + "," + std::to_string(j); });
    }
    const Permutation z = Qd.permutation(IsometryMap::z());
    const Permutation o = Qd.permutation(IsometryMap::o());
    for (std::uint32_t i = 0; i < n; ++i) {
      if (Qd.in_pi1(i) || Qd.in_pi2(i)) r.expect(z[i] == i, [&] { return "z moves generator point " + std::to_string(i); });
      r.expect(o[o[i]] == i, [&] { return "o^2 != 1 at " + std::to_string(i); });
      if (Qd.in_pi1(i)) r.expect(Qd.in_pi2(o[i]), [&] { return "o does not swap pi1, pi2"; });
    }
    r.domain_size = r.checked;
    r.scope = "sampled(pairs)";
    out.push_back(r);
  }
  return out;
}

}  // namespace clq
