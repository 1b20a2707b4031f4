#pragma once

#include <array>

namespace mpimex::euler1d {

// Conservative state (rho, rho*u, rho*E).
using ConsState = std::array<double, 3>;

double pressure(const ConsState& u, double gamma);
ConsState physical_flux(const ConsState& u, double gamma);

// Roe flux across a static face; consistency F(U,U) equals the physical flux.
// Throws StateValidity on nonpositive density or pressure.
ConsState roe_flux(const ConsState& ul, const ConsState& ur, double gamma);

// Roe flux for the moving-face flux F(U) - vface*U (eigenvalues shifted by
// the face speed, Roe-averaged state unchanged).
ConsState ale_roe_flux(const ConsState& ul, const ConsState& ur, double vface, double gamma);

// Reflecting-wall ghost state: velocity mirrored about the wall speed, same
// density and pressure.
ConsState mirror_state(const ConsState& u, double vwall);

}  // namespace mpimex::euler1d
