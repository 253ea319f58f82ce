// Regenerates the sample domain files in domains/.  Usage: make_domains [dir]

#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "medialparam/domain_io.hpp"
#include "medialparam/shapes.hpp"

using namespace medial;

namespace {

CurveLoop translated(const CurveLoop& loop, const Vec2& d) {
  std::vector<CubicBezier> segs = loop.segments();
  for (auto& bz : segs)
    for (auto& p : bz.p) p = p + d;
  return CurveLoop(std::move(segs));
}

void emit(const std::string& dir, const std::string& name,
          std::vector<CurveLoop> loops, std::vector<CurveRole> roles) {
  DomainSpec d = make_domain(std::move(loops), std::move(roles));
  std::string path = dir + "/" + name + ".json";
  write_domain(d, path);
  std::printf("wrote %s (%zu curves)\n", path.c_str(), d.loops.size());
}

}  // namespace

int main(int argc, char** argv) {
  using namespace medial::shapes;
  std::string dir = argc > 1 ? argv[1] : "domains";
  constexpr double deg = std::numbers::pi / 180.0;

  emit(dir, "capsule", {stadium(1.0, 1.0)}, {CurveRole::Outer});
  emit(dir, "disk", {circle({0, 0}, 1.0)}, {CurveRole::Outer});
  emit(dir, "star5", {star({0, 0}, 1.0, 0.35, 5)}, {CurveRole::Outer});
  emit(dir, "star_hole", {star({0, 0}, 1.0, 0.35, 5), circle({0, 0}, 0.25)},
       {CurveRole::Outer, CurveRole::Hole});
  emit(dir, "ellipse_hole10",
       {ellipse({0, 0}, 1.0, 0.6, 0.0), ellipse({0, 0}, 0.45, 0.2, 10 * deg)},
       {CurveRole::Outer, CurveRole::Hole});
  emit(dir, "l3holes",
       {rounded_polygon({{0, 0}, {2, 0}, {2, 0.8}, {0.8, 0.8}, {0.8, 2}, {0, 2}},
                        0.15),
        circle({1.5, 0.4}, 0.12), circle({0.4, 1.5}, 0.12),
        circle({0.4, 0.4}, 0.12)},
       {CurveRole::Outer, CurveRole::Hole, CurveRole::Hole, CurveRole::Hole});
  // Perimeters 2*pi*1.25 : 2*pi*0.625 : 2*pi*0.25 = 5 : 2.5 : 1.
  emit(dir, "three_component",
       {translated(circle({0, 0}, 1.25), {-2.2, 0.0}),
        translated(circle({0, 0}, 0.625), {0.6, 0.0}),
        translated(circle({0, 0}, 0.25), {2.4, 0.0})},
       {CurveRole::Outer, CurveRole::Outer, CurveRole::Outer});
  emit(dir, "annulus", {circle({0, 0}, 1.0), circle({0, 0}, 0.45)},
       {CurveRole::Outer, CurveRole::Hole});
  return 0;
}
