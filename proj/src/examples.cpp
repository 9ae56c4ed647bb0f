#include "blackwell/examples.hpp"

namespace blackwell {

Distortion stubborn_example_a() {
  StubbornSpec s;
  s.x_star = Belief({0.2, 1.0 / 3.0, 1.0 - 0.2 - 1.0 / 3.0});
  s.correct_faces = {Face({0})};
  s.vertex_images.emplace(1, Belief({0.3, 0.5, 0.2}));
  s.vertex_images.emplace(2, Belief({0.2, 1.0 / 6.0, 1.0 - 0.2 - 1.0 / 6.0}));
  return Distortion::stubborn_form(3, std::move(s));
}

Distortion stubborn_example_b() {
  StubbornSpec s;
  s.x_star = Belief({0.5, 0.5, 0.0});
  s.correct_faces = {Face({0, 2})};
  s.edge_case = EdgeCase{Face({0, 1}), 1};
  s.vertex_images.emplace(1, Belief({0.3, 0.7, 0.0}));
  return Distortion::occasionally_stubborn(3, std::move(s));
}

}  // namespace blackwell
