#pragma once

#include <vector>

namespace bj::testing {

// AR(2) sample (0.5, -0.2) plus 10, rounded to 6 decimals. Reference values in
// the tests were computed from this vector with scipy 1.15 / statsmodels.
inline const std::vector<double> kSample = {
    10.374944, 10.421614, 10.66607,  10.785433, 10.877853, 9.486822,  9.867872,  8.43387,
    9.510159,  8.806682,  9.430038,  10.427732, 9.913005,  9.968672,  8.361317,  8.329665,
    10.180851, 9.269963,  10.249264, 8.882279,  8.483904,  8.370071,  9.4954,    10.608046,
    9.339135,  9.366486,  11.437368, 10.527995, 9.160709,  9.861335,  9.874887,  9.263486,
    7.861052,  9.896155,  9.804834,  9.923972,  8.937376,  10.785608, 11.353202, 11.500355,
    10.369119, 10.352407, 10.992987, 11.449021, 10.838297, 10.067439, 9.506581,  8.991158,
    8.628784,  9.876195,  9.967788,  8.012798,  8.857594,  10.890068, 10.398344, 8.167822,
    8.8799,    10.59136,  10.721699, 9.814503};

}  // namespace bj::testing
