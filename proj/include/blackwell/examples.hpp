#ifndef BLACKWELL_EXAMPLES_HPP
#define BLACKWELL_EXAMPLES_HPP

#include "blackwell/distortions.hpp"

namespace blackwell {

/// Three states; x* = (1/5, 1/3, 7/15) off the correct vertex e1, with
/// e3 -> (1/5, 1/6, 19/30) and e2 -> (3/10, 1/2, 1/5). Built without the structural checks.
Distortion stubborn_example_a();

/// Three states; trivial on 1.5 edges: x* = (1/2, 1/2, 0), the face {e1, e3} correct,
/// the edge from e2 to x* stubborn and e2 -> (3/10, 7/10, 0).
Distortion stubborn_example_b();

}  // namespace blackwell

#endif  // BLACKWELL_EXAMPLES_HPP
