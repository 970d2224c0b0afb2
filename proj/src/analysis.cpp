#include "bathlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bathlab {

void EnsembleSummary::finalize() {
    max_abs_z = 0.0;
    std::size_t over = 0;
    for (const auto& c : cells) {
        max_abs_z = std::max(max_abs_z, std::abs(c.z));
        if (std::abs(c.z) > z_threshold) ++over;
    }
    const double frac =
        cells.empty() ? 0.0 : static_cast<double>(over) / static_cast<double>(cells.size());
    pass = frac <= max_fail_fraction + 1e-15;
}

namespace {

// jackknife (leave-one-realization-out) standard error of the mean
CovEstimate jackknife_mean(const std::vector<double>& per_realization) {
    CovEstimate out;
    const std::size_t n = per_realization.size();
    if (n < 2) throw std::invalid_argument("jackknife: need at least 2 realizations");
    double sum = 0.0;
    for (double v : per_realization) sum += v;
    out.estimate = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : per_realization) {
        const double loo = (sum - v) / static_cast<double>(n - 1);
        const double dev = loo - out.estimate; // jackknife mean of means equals the mean
        ss += dev * dev;
    }
    const double var = (static_cast<double>(n - 1) / static_cast<double>(n)) * ss;
    out.stderr_est = std::sqrt(var);
    out.degenerate = out.stderr_est == 0.0;
    return out;
}

} // namespace

CovEstimate symmetrized_covariance(const std::vector<std::vector<double>>& ens_a,
                                   const std::vector<std::vector<double>>& ens_b,
                                   std::size_t lag, bool symmetrized_path) {
    if (ens_a.size() != ens_b.size())
        throw std::invalid_argument("symmetrized_covariance: ensembles differ in size");
    if (ens_a.size() < 2)
        throw std::invalid_argument("symmetrized_covariance: need at least 2 realizations");
    std::vector<double> per_r(ens_a.size());
    for (std::size_t r = 0; r < ens_a.size(); ++r) {
        const auto& a = ens_a[r];
        const auto& b = ens_b[r];
        if (a.size() != b.size())
            throw std::invalid_argument("symmetrized_covariance: series grids differ");
        if (a.size() <= lag)
            throw std::invalid_argument("symmetrized_covariance: lag exceeds series length");
        const std::size_t m = a.size() - lag;
        double acc = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            if (symmetrized_path) {
                acc += 0.5 * (a[t] * b[t + lag] + b[t + lag] * a[t]);
            } else {
                acc += a[t] * b[t + lag];
            }
        }
        per_r[r] = acc / static_cast<double>(m);
    }
    return jackknife_mean(per_r);
}

EnsembleSummary fdr_check(const CouplingModel& model, const ThermalState& thermal,
                          const NoiseEnsemble& ensemble, const std::vector<std::size_t>& lags,
                          double d) {
    if (ensemble.model_tag != model.tag() || ensemble.thermal_tag != thermal.tag())
        throw std::invalid_argument(
            "fdr_check: ensemble provenance does not match the supplied model/thermal state "
            "(refusing to compare against the wrong target)");

    EnsembleSummary summary;
    summary.check = "fdr";
    summary.model_tag = model.tag();
    summary.thermal_tag = thermal.tag();
    summary.n_realizations = ensemble.f1.size();
    summary.z_threshold = 3.0;
    summary.max_fail_fraction = 0.01;
    summary.master_seed = ensemble.master_seed;
    {
        std::ostringstream os;
        os << "targets truncated at nu_max=" << ensemble.nu_max << "; lag step h=" << ensemble.h;
        summary.notes = os.str();
    }

    struct PairSpec {
        const char* name;
        CovariancePair pair;
        const std::vector<std::vector<double>>* a;
        const std::vector<std::vector<double>>* b;
    };
    const PairSpec pairs[3] = {
        {"11", CovariancePair::P11, &ensemble.f1, &ensemble.f1},
        {"22", CovariancePair::P22, &ensemble.f2, &ensemble.f2},
        {"12", CovariancePair::P12, &ensemble.f1, &ensemble.f2},
    };
    for (const auto& ps : pairs) {
        for (std::size_t lag : lags) {
            const double dt = ensemble.h * static_cast<double>(lag);
            CovCell cell;
            cell.pair = ps.name;
            cell.lag = dt;
            const CovEstimate est = symmetrized_covariance(*ps.a, *ps.b, lag);
            cell.estimate = est.estimate;
            cell.stderr_est = est.stderr_est;
            cell.degenerate = est.degenerate;
            cell.target = fdr_target(model, thermal, dt, ps.pair, d, ensemble.nu_max);
            cell.z = est.degenerate ? (cell.estimate == cell.target ? 0.0
                                                                    : std::numeric_limits<double>::infinity())
                                    : (cell.estimate - cell.target) / cell.stderr_est;
            summary.cells.push_back(cell);
        }
    }
    summary.finalize();
    return summary;
}

EnsembleSummary equipartition_check(const MomentEnsemble& ensemble,
                                    const ThermalState& thermal, const OscillatorPair& pair) {
    if (thermal.mode != ThermalMode::Classical)
        throw std::invalid_argument(
            "equipartition_check: targets are defined for the classical mode only");
    pair.validate();

    EnsembleSummary summary;
    summary.check = "equipartition";
    summary.model_tag = ensemble.model_tag;
    summary.thermal_tag = ensemble.thermal_tag;
    summary.n_realizations = ensemble.means.size();
    summary.z_threshold = 3.0;
    summary.max_fail_fraction = 0.0;
    summary.master_seed = ensemble.master_seed;
    {
        std::ostringstream os;
        os << "burn-in " << ensemble.burn_in << " (5 friction times), unit-mass targets";
        summary.notes = os.str();
    }

    const double w0sq = pair.omega0 * pair.omega0;
    const double kT = thermal.kT;
    const char* names[4] = {"R^2", "Z^2", "Rdot^2", "Zdot^2"};
    const double targets[4] = {kT / (2.0 * w0sq), 2.0 * kT / w0sq, kT / 2.0, 2.0 * kT};
    for (int q = 0; q < 4; ++q) {
        std::vector<double> vals(ensemble.means.size());
        for (std::size_t r = 0; r < vals.size(); ++r) vals[r] = ensemble.means[r][static_cast<std::size_t>(q)];
        const CovEstimate est = jackknife_mean(vals);
        CovCell cell;
        cell.pair = names[q];
        cell.estimate = est.estimate;
        cell.stderr_est = est.stderr_est;
        cell.degenerate = est.degenerate;
        cell.target = targets[q];
        cell.z = est.degenerate
                     ? (cell.estimate == cell.target ? 0.0 : std::numeric_limits<double>::infinity())
                     : (cell.estimate - cell.target) / cell.stderr_est;
        summary.cells.push_back(cell);
    }
    summary.finalize();
    return summary;
}

double retardation_onset(const Trajectory& traj, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("retardation_onset: eps must be > 0");
    for (std::size_t i = 0; i < traj.x2.size(); ++i) {
        if (std::abs(traj.x2[i]) > eps) return traj.t(i);
    }
    return std::numeric_limits<double>::infinity();
}

} // namespace bathlab
