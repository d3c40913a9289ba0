#pragma once

#include <functional>
#include <vector>

#include "qlev/airy.hpp"
#include "qlev/potential.hpp"

namespace qlev {

/// A monotone change of coordinate z -> w with its derivative and a sampled
/// grid for inversion. Higher derivatives are optional; when absent they are
/// obtained by central differences of `derivative`.
struct CoordinateMap {
    std::function<double(double)> forward;
    std::function<double(double)> derivative;
    std::function<double(double)> second;
    std::function<double(double)> third;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> grid_z;
    std::vector<double> grid_w;
    std::function<double(double)> inverse_guess;

    /// z such that forward(z) = w, by monotone cubic interpolation on the
    /// grid followed by Newton polishing. Throws OutsideMappedDomain.
    double inverse(double w) const;
    /// True when the sampled values and derivatives are strictly increasing
    /// and positive on the whole grid.
    bool is_monotone() const;
};

/// Builds a map from forward/derivative callables and samples `samples`
/// points on [lo, hi] (geometrically spaced when lo > 0 and `geometric`).
CoordinateMap make_coordinate_map(std::function<double(double)> forward,
                                  std::function<double(double)> derivative,
                                  double lo, double hi, int samples = 401,
                                  bool geometric = false);

/// {w, z} = w'''/w' - (3/2)(w''/w')^2.
double schwarzian(const CoordinateMap& map, double z);

/// F~(w) = (F(z) - {w,z}/2) / w'(z)^2 evaluated at z = map.inverse(w).
std::function<double(double)> transform_f(std::function<double(double)> f,
                                          CoordinateMap map);

/// Liouville rescaling psi~ = sqrt(w') psi together with the transformed
/// derivative d psi~/dw.
struct WavePoint {
    cplx psi;
    cplx dpsi;
};
WavePoint rescale_wavefunction(const CoordinateMap& map, double z, WavePoint original);

/// F in gravity units (lengths ell_g, energies eps_g):
/// F(y) = E - y - v(y), the n-th derivative for order n.
class GravityF {
public:
    GravityF(ScaledPotential v, cplx energy) : v_(std::move(v)), energy_(energy) {}
    double operator()(double y, int order = 0) const;
    cplx complex_value(double y) const;
    double energy() const { return energy_.real(); }
    cplx complex_energy() const { return energy_; }
    const ScaledPotential& potential() const { return v_; }

private:
    ScaledPotential v_;
    cplx energy_;
};

/// Q = F''/(4F^2) - 5F'^2/(16F^3), independent of the length unit.
double badlands_scaled(const GravityF& f, double y);
double badlands(const PhysicalSetup& setup, const PotentialModel& model,
                double energy, double z);

/// Turning point y_t (ell_g units) of the real-energy problem.
double turning_point_scaled(const GravityF& f);

struct LangerProblem {
    PhysicalSetup setup;
    PotentialModel model;
    double energy = 0.0;     // J
    double z_t = 0.0;        // m
    double bold_z_t = 0.0;   // E / eps_g
};

LangerProblem make_langer_problem(const PhysicalSetup& setup, const PotentialModel& model,
                                  double energy);

/// Width (in ell_g) of the turning-point neighbourhood handled by the local
/// series of F.
inline constexpr double kTurningPointSeriesWidth = 0.01;

/// Action integrals in gravity units: int_y^{y_t} sqrt(F) for y < y_t and
/// int_{y_t}^y sqrt(-F) for y > y_t.
double action_below(const GravityF& f, double y, double y_t);
double action_above(const GravityF& f, double y, double y_t);

/// Local data of the Langer coordinate at one point, in gravity units:
/// u = z_t - z (bold), d1 = dz/dy, d2 = d^2z/dy^2, bold_f = F (bold).
struct LangerLocal {
    double u;
    double d1;
    double d2;
    double bold_f;
};

/// Same quantities from a known u, valid away from the turning point.
LangerLocal langer_local_from_u(const GravityF& f, double y, double u);

/// The Langer coordinate of a real-energy problem. Internally works in gravity
/// units; the SI accessors convert.
class LangerMap {
public:
    explicit LangerMap(const LangerProblem& problem);

    const LangerProblem& problem() const { return problem_; }
    const GravityF& f() const { return f_; }

    double y_t() const { return y_t_; }
    double bold_z_t() const { return bold_z_t_; }
    double y_lo() const { return grid_y_.front(); }
    double y_hi() const { return grid_y_.back(); }

    /// Action integrals S(y) = int_y^{y_t} sqrt(F) below and
    /// int_{y_t}^y sqrt(-F) above the turning point.
    double action_scaled(double y) const;
    double u_scaled(double y) const;
    LangerLocal local_scaled(double y) const;
    double schwarzian_scaled(double y) const;
    double bold_z_scaled(double y) const { return bold_z_t_ - u_scaled(y); }
    double inverse_scaled(double bold_z) const;

    // SI accessors: z in metres, derivatives per metre.
    double bold_z(double z) const;
    double derivative(double z) const;
    double second_derivative(double z) const;
    double schwarzian(double z) const;
    double inverse(double bold_z) const;

    const std::vector<double>& grid_y() const { return grid_y_; }
    const std::vector<double>& grid_bold_z() const { return grid_bold_; }

    CoordinateMap coordinate_map() const;

private:
    double series_u(double s, int order) const;

    LangerProblem problem_;
    GravityF f_;
    double y_t_ = 0.0;
    double bold_z_t_ = 0.0;
    double a1_cbrt_ = 0.0;
    double q2_ = 0.0, q3_ = 0.0, q4_ = 0.0;
    std::vector<double> grid_y_;
    std::vector<double> grid_action_;
    std::vector<double> grid_bold_;
    std::function<double(double)> inverse_guess_;
};

CoordinateMap langer_map(const LangerProblem& problem);

double langer_f(const LangerMap& map, double bold_z);
double langer_f(const LangerProblem& problem, double bold_z);

/// Original (psi, dpsi/dy) <-> Langer (psi, dpsi/dz) in gravity units.
WavePoint to_langer(const LangerLocal& local, WavePoint original);
WavePoint from_langer(const LangerLocal& local, WavePoint langer);

/// Lower edge of the WKB window on the surface side: the largest y below
/// `start` (stepping geometrically down) where |Q| < threshold. Throws
/// NoWkbWindow when no such point is found.
double wkb_window_edge(const std::function<double(double)>& q, double start,
                       double threshold = 1e-6);

}  // namespace qlev
