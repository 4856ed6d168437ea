#pragma once

// Expansion constants computed independently in 40-digit arithmetic
// (direct quadrature of the radial integrals plus a term-by-term tail sum).

namespace malab::testdata {

struct FrozenConstants {
  int n;
  long long zeta_num;
  long long zeta_den;
  double C0;
  double C1;
  double C2;
};

inline constexpr FrozenConstants kPowerSeries[] = {
    {2, 1, 4, -1.1709016348801553506, -1.2090032102857938106, 1.6829521378668287593},
    {2, 1, 2, -1.2302486162721045685, -1.3537054063955613586, 0.76246652510052530618},
    {2, 1, 1, -1.5, -2.0, 0.1451156413532315126},
    {2, 3, 2, -2.4457963688392466788, -2.4457963688392466788, -4.1133493921179470394},
    {3, 1, 4, -1.1408781210006387609, -0.031761978745458286947, -0.86493106172404095981},
    {3, 1, 2, -1.1269833976705361786, -0.085333333333333333333, -0.94552689313078123683},
    {3, 1, 1, -1.1384593550855411089, -0.25, -1.1544928046064846231},
    {3, 3, 2, -1.2302486162721045685, 0.0, -2.5706392166978389417},
    {3, 2, 1, -1.5, 1.0, -1.4344540714958673408},
};

// n = zeta = 2
inline constexpr double kC3 = -0.39940386510971796817;
inline constexpr double kC4 = 0.031762164195967095797;

}  // namespace malab::testdata
