#pragma once

namespace sta {

inline constexpr const char* kVersion = "0.1.0";

// Convention string recorded in every CSV metadata header.
inline constexpr const char* kPhaseConvention =
    "xi_n from instantaneous H0 eigenvalues; q element via U H U^dagger "
    "(+i sin gamma)";

}  // namespace sta
