#pragma once

#include <array>

// Published Pareto designs for the valve case study (r = 17 mm, l_V = 118 mm).
// theta1 is printed in radians to three decimals; the selected optimum was also
// quoted with theta1 = 149.679 degrees.
namespace mirrorplan::testdata {

struct ReferenceDesign {
    double a, b, c, theta1_rad, f1, f2, f3;
};

inline constexpr std::array<ReferenceDesign, 10> kPublishedPareto{{
    {187.879, 255.392, 181.091, 2.612, 680.596, 180.589, 474.469},
    {188.501, 254.701, 179.621, 2.613, 684.255, 180.101, 477.499},
    {189.329, 257.592, 184.673, 2.610, 678.156, 182.145, 470.137},
    {189.329, 255.584, 177.641, 2.611, 679.927, 180.725, 471.979},
    {189.329, 257.440, 183.339, 2.611, 679.927, 182.038, 471.979},
    {189.329, 257.338, 183.339, 2.611, 679.927, 181.966, 471.979},
    {189.185, 260.852, 181.046, 2.610, 677.640, 184.451, 469.780},
    {189.329, 257.195, 178.050, 2.611, 679.927, 181.864, 471.979},
    {189.185, 260.852, 181.046, 2.610, 677.640, 184.451, 469.780},
    {189.185, 260.852, 181.046, 2.610, 677.640, 184.451, 469.780},
}};

inline constexpr double kSelectedTheta1Deg = 149.679;

}  // namespace mirrorplan::testdata
