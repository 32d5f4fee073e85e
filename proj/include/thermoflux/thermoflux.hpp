#ifndef THERMOFLUX_THERMOFLUX_HPP
#define THERMOFLUX_THERMOFLUX_HPP

#include "thermoflux/core_thermo.hpp"
#include "thermoflux/cumulant_algebra.hpp"
#include "thermoflux/duality.hpp"
#include "thermoflux/errors.hpp"
#include "thermoflux/gibbs_sampler.hpp"
#include "thermoflux/homotopy.hpp"
#include "thermoflux/quadrature.hpp"
#include "thermoflux/quantum_reference.hpp"
#include "thermoflux/tomography.hpp"
#include "thermoflux/verify.hpp"

namespace thermoflux {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // THERMOFLUX_THERMOFLUX_HPP
