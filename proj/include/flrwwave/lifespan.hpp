#ifndef FLRWWAVE_LIFESPAN_HPP
#define FLRWWAVE_LIFESPAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "flrwwave/exponents.hpp"
#include "flrwwave/kato.hpp"
#include "flrwwave/params.hpp"

namespace flrw {

enum class BoundKind { PowerLaw, Exponential, ImplicitPowerLog };

enum class BoundSource {
    GlasseySubcritical,    // T <= eps^{-k}, p < p_G'
    GlasseyCritical,       // T <= exp(eps^{-(p-1)}), p = p_G'
    ZeroOrderSubcritical,  // T <= eps^{-k}, p < p_0
    TdLogLifespan,         // T^s (ln T)^{-l} <= eps^{-m}, alpha = 1
    TdAcceleratedPower,    // alpha > 1
    WaveSubcritical,       // p < p_c'
    SecondarySubcritical,  // p < p_0'
    WaveCritical,          // p = p_c'
    HeatSubcritical,       // p < p_F'
    HeatCritical,          // p = p_F' (rate depends on mu)
    SdLogLifespan,         // alpha = 1
    SdAcceleratedPower     // alpha > 1
};

std::string bound_source_name(BoundSource s);

/// One theorem's lifespan upper bound at a parameter point, with the C = 1
/// convention.  PowerLaw: T <= eps^{-k}; Exponential: T <= exp(eps^{-rate});
/// ImplicitPowerLog: T^s (ln T)^{-l} <= eps^{-m}.
struct LifespanBound {
    BoundSource source;
    BoundKind kind = BoundKind::PowerLaw;
    double k = 0.0;
    double rate = 0.0;
    double s = 0.0, l = 0.0, m = 0.0;
    std::string condition;
    bool applicable = false;
    // When p < p_0 the data hypothesis u1 >= u0 >= 0 relaxes to u1 >= 0.
    // Consumed by the solver's data validator.
    bool weak_data_ok = false;

    // Effective power-law exponent for ranking (m/s for implicit bounds).
    double effective_k() const;
};

// Tolerance for branch selection at exact criticality (p = threshold).
inline constexpr double kCriticalTol = 1e-12;

// Every theorem bound at m, applicable or not (inapplicable entries are kept,
// flagged, for region-grid shading).
std::vector<LifespanBound> applicable_bounds(const ModelParams& m);

// Asymptotically smallest applicable bound as eps -> 0: power-type bounds
// (implicit ranked by m/s) beat exponentials; ties by order of appearance.
LifespanBound best_bound(const std::vector<LifespanBound>& bounds);

enum class RegionLabel { G, O, C, F, A, NoBlowupResult };

std::string region_label_name(RegionLabel r);

struct RegionResult {
    RegionLabel label = RegionLabel::NoBlowupResult;
    std::optional<LifespanBound> winner;
};

RegionResult classify_region(const ModelParams& m);

struct BoundValue {
    double value = 0.0;
    bool implicit = false;   // value solves T^s (ln T)^{-l} = eps^{-m}
    bool nonunique = false;  // s <= 0: the implicit relation is not monotone
};

// Evaluates the bound at eps with C = 1; implicit bounds solved for the
// unique T > e by bisection.
BoundValue bound_value(const LifespanBound& b, double epsilon);

// Kato-lemma instantiation behind a power-law theorem bound (A0 ~ eps^p),
// as carried out in the corresponding proof.  Defined for the Kato-proved
// sources; throws std::domain_error otherwise.
KatoProblem kato_instantiation(BoundSource src, const ModelParams& m);

// --- region grids (figure data) ---

struct GridSpec {
    enum class Axis { Mu, W } axis = Axis::Mu;
    int n = 3;
    double alpha = 0.0;  // used when axis == Mu
    Nonlinearity nonlinearity = Nonlinearity::TimeDerivative;
    double x_min = 0.0, x_max = 1.0;
    double p_min = 1.0, p_max = 4.0;
    int resolution = 60;
    double R = 1.0;
};

struct GridRow {
    double x = 0.0, p = 0.0;
    RegionLabel region = RegionLabel::NoBlowupResult;
    std::string bound_kind;  // "power", "exp", "power-log", or "none"
    double value = 0.0;      // k, rate, or m/s
};

struct CurvePoint {
    std::string name;
    double x = 0.0, p = 0.0;
};

struct RegionGrid {
    std::vector<GridRow> rows;
    std::vector<CurvePoint> curves;
};

RegionGrid region_grid(const GridSpec& spec);

// Settings behind the seven published region diagrams (1-based).
GridSpec figure_spec(int figure);

}  // namespace flrw

#endif
