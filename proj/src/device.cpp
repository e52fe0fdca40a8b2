#include "donn/device.hpp"

#include <stdexcept>
#include <string>

namespace donn {

void Vo2Params::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("Vo2Params: " + msg); };
    if (!(v_high > v_low)) fail("v_high must exceed v_low");
    if (!(v_low > 0.0)) fail("v_low must be positive");
    if (!(r_high > r_low)) fail("r_high must exceed r_low");
    if (!(r_low > 0.0)) fail("r_low must be positive");
    if (!(tau > 0.0)) fail("tau must be positive");
    if (!(cmp_slope > 0.0)) fail("cmp_slope must be positive");
}

}  // namespace donn
