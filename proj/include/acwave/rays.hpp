// Hamiltonian ray tracing for the degenerate acoustic half-space metric:
// closed-form bicharacteristics on both frequency branches, an independent
// adaptive integrator, boundary-collision bookkeeping, cusp continuation,
// and the period / tangential-hop / boundary-dwell quantities.

#pragma once

#include <iosfwd>
#include <vector>

namespace acwave::rays {

//----------------------------------------------------------------------------
// Phase-space state
//----------------------------------------------------------------------------

// Point (t, x_d, x', tau, xi_d, xi') in the phase space of the half-space
// wave operator.  The tangential tuples xp and xip have length d-1 and must
// agree in size.  States on the characteristic set satisfy
//   kappa * xd * (xid^2 + |xip|^2) - tau^2 = 0.
// Sign convention: tau < 0 advances physical time t as the flow parameter s
// increases (t(s) = -2 s tau + t0).
struct PhaseState {
  double t = 0.0;               // time coordinate
  double xd = 0.0;              // normal coordinate, >= 0
  std::vector<double> xp;       // tangential coordinates x'
  double tau = 0.0;             // dual of t
  double xid = 0.0;             // normal frequency xi_d
  std::vector<double> xip;      // tangential frequencies xi'

  int dim() const { return static_cast<int>(xp.size()) + 1; }
  double xip_norm() const;      // |xi'|

  // Throws ValidationError on xd < 0, mismatched tuple lengths, or
  // non-finite entries.
  void validate() const;
};

// Conserved Hamiltonian kappa * xd * (xid^2 + |xip|^2) - tau^2.
double hamiltonian(const PhaseState& state, double kappa);

// True when |H| <= rtol * (kappa*xd*|xi|^2 + tau^2 + floor).
bool on_characteristic_set(const PhaseState& state, double kappa,
                           double rtol = 1e-9);

//----------------------------------------------------------------------------
// Traced paths
//----------------------------------------------------------------------------

// One smooth piece of a ray between consecutive boundary collisions.  The
// piece is reproduced from its own interior reference state, so segments are
// independently evaluable closed forms.
struct RaySegment {
  double s_begin = 0.0;         // inclusive lower flow parameter
  double s_end = 0.0;           // exclusive upper flow parameter (collision)
  double s_ref = 0.0;           // interior reference parameter
  PhaseState ref_state;         // exact state at s_ref
};

// Boundary collision record: flow parameter, time, tangential coordinates.
struct Collision {
  double s = 0.0;
  double t = 0.0;
  std::vector<double> xp;
};

// Immutable traced ray.  Collisions are strictly increasing in s; the path
// is continuous in (t, x_d, x') across each collision even though xi_d
// diverges there (cusp in the spatial projection).
struct RayPath {
  std::vector<RaySegment> segments;
  std::vector<Collision> collisions;
  double kappa = 0.0;
};

//----------------------------------------------------------------------------
// Flows
//----------------------------------------------------------------------------

// Exact flow of the bicharacteristic system
//   d/ds (t, x_d, x', tau, xi_d, xi') =
//       (-2 tau, 2 kappa x_d xi_d, 2 kappa x_d xi', 0, -kappa |xi|^2, 0)
// through parameter s, valid on the smooth segment containing s = 0.
// Throws ValidationError when s crosses a boundary collision (|xi'| != 0
// branch) or the frequency pole kappa*s*xid + 1 = 0 (|xi'| = 0 branch);
// split the path with reflect_and_continue instead.
PhaseState closed_form_flow(const PhaseState& state0, double kappa, double s);

// Adaptive embedded Runge-Kutta integration of the same system with local
// error <= tol per step.  Independent oracle for smooth segments; throws
// NumericalError if the step size collapses (expected near collisions).
PhaseState numeric_flow(const PhaseState& state0, double kappa, double s,
                        double tol);

//----------------------------------------------------------------------------
// Collisions and continuation
//----------------------------------------------------------------------------

// Boundary-collision parameters
//   s_k = (arctan(xid/|xi'|) - (2k+1) pi/2) / (kappa |xi'|)
// for k = k_min..k_max inclusive, in that order (s_k decreases as k
// increases; consecutive entries differ by exactly pi/(kappa |xi'|)).
// Throws ValidationError when |xi'| = 0 (no periodic collisions on that
// branch).
std::vector<double> collision_parameters(const PhaseState& state0,
                                         double kappa, int k_min, int k_max);

// Traces the smooth segment from s = 0 forward to the first boundary
// collision.  Requires xd > 0 and |xi'| != 0.
RayPath trace_ray(const PhaseState& state0, double kappa);

// Extends a traced path forward across `through` additional cusp
// collisions; each new segment re-expands from the boundary by the same
// closed form, with tangential hop
//   dx' = pi * xd0 * (xi'/|xi'|) * (|xi'|^2 + xid0^2) / |xi'|^2
// between successive collisions.
RayPath reflect_and_continue(const RayPath& path, int through);

// Path state at flow parameter s in [0, last collision], evaluated from the
// containing segment's reference state.
PhaseState eval_path(const RayPath& path, double s);

// Fraction of one collision-to-collision period during which the ray stays
// in the boundary layer x_d <= c * xd0, measured by bisection on the closed
// form (quadratic tangency at the boundary makes this ~ sqrt(c)).
// Requires |xi'| != 0 and c in (0, 1).
double dwell_fraction(const PhaseState& state0, double kappa, double c);

//----------------------------------------------------------------------------
// Export
//----------------------------------------------------------------------------

// Writes n_samples states uniformly spaced in s over the traced range as
// CSV with columns s, t, x_d, xp_0.., xi_d (xi_d diverges at collisions;
// samples landing on a collision report the finite evaluated value).
void write_path_csv(const RayPath& path, int n_samples, std::ostream& os);

// Writes the collision table as CSV with columns k, s, t, xp_0...
void write_collisions_csv(const RayPath& path, std::ostream& os);

}  // namespace acwave::rays
