// Walk through the q=5 construction: the special set S, its sign partition,
// the two 12-tight sets, and their Cameron-Liebler images in PG(3,5).

#include <cstdio>

#include "clq/construction.hpp"
#include "clq/verifier.hpp"

int main() {
  using namespace clq;
  const auto c = construct(5, 1);
  const FieldTower& t = *c->tower;

  std::printf("E = GF(%u), F = GF(%u), alpha = x, f = ", t.size(), t.q());
  for (std::size_t i = t.polynomial().size(); i-- > 0;) std::printf("%u ", t.polynomial()[i]);
  std::printf("(high to low)\n");

  std::printf("S (%zu elements, as logs):", c->S.size());
  for (const auto& a : c->S.elements) std::printf(" %u", t.log(a));
  std::printf("\nX1 = {");
  for (auto i : c->partition.X1) std::printf(" %u", i);
  std::printf(" }  X2 = {");
  for (auto i : c->partition.X2) std::printf(" %u", i);
  std::printf(" }\n");

  std::printf("quadric: %zu points; T1 %zu, T2 %zu, x = %llu\n", c->quadric->size(), c->sets.T1.points.size(),
              c->sets.T2.points.size(), static_cast<unsigned long long>(c->x()));

  const auto tight = verify_tight_set(*c->quadric, c->sets.T1.points, c->x());
  std::printf("T1 tight: %s  off %s  on %s\n", tight.pass() ? "yes" : "no", tight.details["off_count"].dump().c_str(),
              tight.details["on_count"].dump().c_str());

  int bad = !tight.pass();
  for (const auto& r : verify_cameron_liebler(*c->scene, c->L1)) {
    std::printf("  %-28s %s\n", r.name.c_str(), r.pass() ? "PASS" : "FAIL");
    bad += !r.pass();
  }

  // the star of p0 is the trivial class with parameter 1
  const auto star = c->scene->point_lines(c->klein.p0);
  const auto s = make_line_class("star(p0)", 1, {star.begin(), star.end()}, c->scene->num_lines());
  std::printf("star(p0) is a CL class: %s\n", all_pass(verify_cameron_liebler(*c->scene, s)) ? "yes" : "no");
  return bad == 0 ? 0 : 1;
}
