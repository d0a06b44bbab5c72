#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stereo/mellin_image.hpp"

namespace stereo::detail {

cplx mellin_quadrature(const std::function<double(double)>& f, double c,
                       const std::vector<double>& breakpoints, double gamma, cplx s, double tol);

double probe_origin_exponent(const std::function<double(double)>& f, double c,
                             std::vector<std::string>* warnings);

}  // namespace stereo::detail
