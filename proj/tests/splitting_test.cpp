#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foldspace/splitting.hpp"
#include "test_instances.hpp"

using namespace foldspace;
using namespace foldspace::instances;

namespace {

std::multiset<std::pair<int, int>> gamma_profile(const Gos& x) {
  Horizontal h = horizontal(x);
  Pi1Data p = pi1_data(h.g);
  std::multiset<std::pair<int, int>> out;
  for (int c = 0; c < p.components; ++c) out.insert({p.chi[c], p.betti[c]});
  return out;
}

}  // namespace

TEST_CASE("peripheral elements of the splittable theta") {
  Gos x = theta_splittable();
  CylinderSet cs = build_cylinders(x);
  REQUIRE(cs.cylinders.size() == 2);
  for (auto& c : cs.cylinders) CHECK(c.mapping_torus);
  // only the w-end of each small edge space lies in Gamma_inf; the a/b
  // ends sit on circle components of Gamma(X)
  auto p0 = peripheral_elements(x, cs, 0);
  REQUIRE(p0.size() == 1);
  CHECK(p0[0].w == 1);
  auto p1 = peripheral_elements(x, cs, 1);
  CHECK(p1.size() == 1);
  // the big edge space is crossed by both cylinders through w: not
  // peripheral there (w is a cutpoint), and the outer ends are inessential
  auto p2 = peripheral_elements(x, cs, 2);
  CHECK(p2.empty());
}

TEST_CASE("push around a cylinder returns home") {
  Gos x = theta_splittable();
  CylinderSet cs = build_cylinders(x);
  auto ps = peripheral_elements(x, cs, 0);
  REQUIRE(!ps.empty());
  const Cylinder& c = cs.cylinders[ps[0].cylinder];
  int n = static_cast<int>(c.cycle.size()) / 2;
  PushTrace tr = push(x, cs, ps[0], n, true);
  CHECK(tr.fiber == ps[0].fiber);
  CHECK(tr.node == ps[0].node);
  PushTrace zero = push(x, cs, ps[0], 0, true);
  CHECK(zero.fiber == ps[0].fiber);
  CHECK(zero.node == ps[0].node);
}

TEST_CASE("push in the identity torus rotates the circle") {
  Gos x = identity_torus();
  CylinderSet cs = build_cylinders(x);
  REQUIRE(cs.cylinders.size() == 1);
  // no essential boundary here, but the rotation mechanics still apply
  PeripheralElement p;
  p.cylinder = 0;
  p.fiber = cs.cylinders[0].cycle[0];
  p.node = 0;
  p.edge_space = cs.cylinders[0].fibers[p.fiber].over;
  p.w = cs.cylinders[0].fibers[p.fiber].node_image[0];
  PushTrace tr = push(x, cs, p, 1, true);
  CHECK(tr.fiber == p.fiber);  // single edge space: rotation returns over it
}

TEST_CASE("find splitting vertex rejects bad preconditions") {
  // chi(Gamma_U) = 0
  SplittingSearch a = find_splitting_vertex(identity_torus());
  CHECK(!a.found.has_value());
  CHECK(a.error.find("not negative") != std::string::npos);
  // weight-0 edges after minimization: irreducibility fails
  Gos v4 = minimize(valence_four_space(), nullptr).gos;
  SplittingSearch b = find_splitting_vertex(v4);
  CHECK(!b.found.has_value());
  CHECK(b.error.find("irreducible") != std::string::npos);
  // the splittable theta has bad cylinders (inessential outer circles)
  SplittingSearch c = find_splitting_vertex(theta_splittable());
  CHECK(!c.found.has_value());
  CHECK(c.error.find("bad") != std::string::npos);
}

TEST_CASE("split move mechanics on a hand-made splitting vertex") {
  Gos x = theta_splittable();
  SeparabilityResult sep = separability(x);
  REQUIRE(sep.separable);
  REQUIRE(sep.vertices[0].kind == SeparableVertex::Kind::Splittable);
  SplittingVertex sv;
  sv.v = 0;
  sv.outgoing = sep.vertices[0].outgoing_edge;
  sv.primary_incoming = sep.vertices[0].incoming[0];
  GammaTracker t = GammaTracker::start(x);
  SplitResult r = split(x, sv, &t);
  CHECK(validate(r.gos).ok);
  CHECK(r.made_weight0);
  CHECK(gamma_profile(r.gos) == gamma_profile(x));
  IrreducibleComponents ic = irreducible_components(r.gos);
  CHECK(ic.components.size() == 2);
}

TEST_CASE("split_to_bad collects already-bad spaces unchanged") {
  Gos x = identity_torus();
  SplitToBadResult r = split_to_bad(x, nullptr);
  CHECK(r.splits_performed == 0);
  REQUIRE(r.components.size() == 1);
  CHECK(gos_isomorphic(r.components[0], x));
}

TEST_CASE("split_to_bad on the splittable theta ends in bad cylinders") {
  Gos x = theta_splittable();
  SplitToBadResult r = split_to_bad(x, nullptr);
  REQUIRE(!r.components.empty());
  std::multiset<std::pair<int, int>> total;
  for (const Gos& y : r.components) {
    CylinderSet cs = build_cylinders(y);
    bool has_bad = false;
    for (size_t c = 0; c < cs.cylinders.size(); ++c)
      if (classify_cylinder(cs, static_cast<int>(c)).verdict == CylinderVerdict::Bad)
        has_bad = true;
    CHECK(has_bad);
    for (auto pr : gamma_profile(y)) total.insert(pr);
  }
  CHECK(total == gamma_profile(x));
}
