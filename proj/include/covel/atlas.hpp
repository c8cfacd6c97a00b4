#pragma once

#include "covel/chart.hpp"

namespace covel {

// Built-in atlas catalog. Chart objects are shared singletons per key so
// that values produced by different call sites compare as living on the
// same chart.
//
//   r1, r2, r3          single-chart R^n
//   s1-a                circle angle in (-pi, pi)
//   s1-b                circle angle in (0, 2pi)
//   s2-angles           sphere (theta, phi); only the polar caps
//                       theta <= 0.02 and theta >= pi - 0.02 are excluded,
//                       phi runs free so closed latitude loops stay inside
//   s2-stereo-north     stereographic projection from the north pole
//   s2-stereo-south     stereographic projection from the south pole
//   t2                  torus angles, 2pi-periodic structures, all of R^2
ChartPtr catalogChart(const std::string& key);

std::vector<std::string> catalogChartKeys();

// theta-cap half-width of the s2-angles chart.
inline constexpr double kSphereCap = 0.02;

// Transitions between catalog charts.
Transition circleAToB();                 // s1-a -> s1-b
Transition sphereStereoNorthToSouth();   // (u,v) -> (u,v)/(u^2+v^2)
Transition sphereAnglesToStereoNorth();  // (theta,phi) -> sin(theta)(cos phi, sin phi)/(1-cos theta)

} // namespace covel
