#include "bathlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace bathlab {

namespace {

// 15-point Kronrod extension of 7-point Gauss, positive half of [-1,1].
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
// Gauss-7 weights for nodes 1, 3, 5, 7 of the list above.
constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename T>
struct PanelEstimate {
    T integral{};
    double error = 0.0;
};

template <typename T, typename F>
PanelEstimate<T> gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T gauss = kGaussW[3] * fc;
    T kron = kKronrodW[7] * fc;
    for (int i = 0; i < 7; ++i) {
        T lo = f(c - h * kKronrodX[i]);
        T hi = f(c + h * kKronrodX[i]);
        kron += kKronrodW[i] * (lo + hi);
        if (i % 2 == 1) gauss += kGaussW[i / 2] * (lo + hi);
    }
    kron *= h;
    gauss *= h;
    if (!std::isfinite(std::abs(kron)) || !std::isfinite(std::abs(gauss))) {
        // singular evaluation inside the panel; force a subdivision
        return {T{}, std::numeric_limits<double>::max() / 4.0};
    }
    double err = std::abs(kron - gauss);
    // standard sharpening of the raw difference
    err = std::pow(200.0 * err, 1.5);
    double scale = std::abs(kron);
    if (scale > 0.0 && err > scale) err = scale;
    if (err < std::abs(kron - gauss)) err = std::abs(kron - gauss) * 1e-2;
    return {kron, err};
}

template <typename T, typename F>
void adaptive_gk(const F& f, double a, double b, double abs_tol, double rel_tol,
                 std::size_t max_intervals, T& value, double& error, std::size_t& evals) {
    struct Interval {
        double a, b, err;
        T val;
        bool operator<(const Interval& o) const { return err < o.err; }
    };
    std::priority_queue<Interval> queue;
    auto first = gk15<T>(f, a, b);
    evals = 15;
    queue.push({a, b, first.error, first.integral});
    T total = first.integral;
    double total_err = first.error;
    std::size_t n_intervals = 1;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (n_intervals >= max_intervals) {
            throw QuadratureError("adaptive quadrature failed to converge: error estimate " +
                                      std::to_string(total_err),
                                  total_err);
        }
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval at floating-point resolution; accept its estimate as-is
            total_err = std::max(total_err - worst.err, 0.0);
            if (queue.empty()) break;
            continue;
        }
        auto left = gk15<T>(f, worst.a, mid);
        auto right = gk15<T>(f, mid, worst.b);
        evals += 30;
        total += left.integral + right.integral - worst.val;
        total_err += left.error + right.error - worst.err;
        queue.push({worst.a, mid, left.error, left.integral});
        queue.push({mid, worst.b, right.error, right.integral});
        ++n_intervals;
    }
    value = total;
    error = total_err;
}

} // namespace

QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, std::size_t max_intervals) {
    QuadResult r;
    adaptive_gk<double>(f, a, b, abs_tol, rel_tol, max_intervals, r.value, r.error, r.evals);
    return r;
}

QuadResultC integrate_gk_complex(const std::function<std::complex<double>(double)>& f,
                                 double a, double b, double abs_tol, double rel_tol,
                                 std::size_t max_intervals) {
    QuadResultC r;
    adaptive_gk<std::complex<double>>(f, a, b, abs_tol, rel_tol, max_intervals, r.value,
                                      r.error, r.evals);
    return r;
}

// ----------------------------- Gauss-Laguerre -------------------------------

namespace {

LaguerreRule build_laguerre(std::size_t n) {
    LaguerreRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // initial guesses (Stroud-Secrest style)
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * static_cast<double>(n));
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * static_cast<double>(n));
        } else {
            const double ai = static_cast<double>(i - 1);
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.x[i - 2]);
        }
        // Newton on the scaled polynomial Lt_k(x) = L_k(x) e^{-x/2}
        double ltn = 0.0, ltnm1 = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            ltn = std::exp(-0.5 * z);
            ltnm1 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double kk = static_cast<double>(k);
                double next = ((2.0 * kk + 1.0 - z) * ltn - kk * ltnm1) / (kk + 1.0);
                ltnm1 = ltn;
                ltn = next;
            }
            // L_n'(x) = n (L_n - L_{n-1}) / x, same relation for scaled values
            const double deriv = static_cast<double>(n) * (ltn - ltnm1) / z;
            const double dz = ltn / deriv;
            z -= dz;
            if (std::abs(dz) < 1e-15 * std::max(1.0, z)) break;
        }
        rule.x[i] = z;
        // one recurrence pass to n+1 for the weight
        double a = std::exp(-0.5 * z), b = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            double next = ((2.0 * kk + 1.0 - z) * a - kk * b) / (kk + 1.0);
            b = a;
            a = next;
        }
        const double np1 = static_cast<double>(n + 1);
        rule.w[i] = z / (np1 * np1 * a * a); // scaled by e^{x_i}
    }
    return rule;
}

std::map<std::size_t, LaguerreRule> g_laguerre_cache;
std::mutex g_laguerre_mutex;

} // namespace

const LaguerreRule& gauss_laguerre(std::size_t n) {
    std::lock_guard<std::mutex> lock(g_laguerre_mutex);
    auto it = g_laguerre_cache.find(n);
    if (it == g_laguerre_cache.end()) it = g_laguerre_cache.emplace(n, build_laguerre(n)).first;
    return it->second;
}

double laguerre_doubling(const std::function<double(double)>& g, double abs_tol,
                         double rel_tol, std::size_t n_start, std::size_t n_max) {
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t n = n_start; n <= n_max; n *= 2) {
        const LaguerreRule& rule = gauss_laguerre(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += rule.w[i] * g(rule.x[i]);
        if (have_prev) {
            const double diff = std::abs(sum - prev);
            if (diff <= std::max(abs_tol, rel_tol * std::abs(sum))) return sum;
        }
        prev = sum;
        have_prev = true;
    }
    throw QuadratureError("Gauss-Laguerre node doubling did not converge", std::abs(prev));
}

// --------------------------- cosine transform -------------------------------

namespace {

// repeated averaging of partial sums (van Wijngaarden / Euler transform)
double accelerate_alternating(const std::vector<double>& partial_sums, double& err_out) {
    std::vector<double> s = partial_sums;
    double prev_diag = s.back();
    while (s.size() > 1) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
        s.pop_back();
        err_out = std::abs(s.back() - prev_diag);
        prev_diag = s.back();
    }
    return s[0];
}

} // namespace

double cos_transform_decaying(const std::function<double(double)>& w, double c,
                              double abs_tol, double rel_tol, double head_scale) {
    if (!(c > 0.0)) throw std::invalid_argument("cos_transform_decaying: requires c > 0");
    auto integrand = [&](double x) { return w(x) * std::cos(c * x); };

    // panel boundaries at the zeros of cos(cx): z_k = (2k+1) pi / (2c)
    const double half_period = M_PI / c;
    auto zero_at = [&](std::size_t k) {
        return (2.0 * static_cast<double>(k) + 1.0) * (0.5 * half_period);
    };

    // head: enough panels to cover the envelope scale of w, integrated adaptively
    const std::size_t head_panels = std::max<std::size_t>(
        4, std::min<std::size_t>(
               512, static_cast<std::size_t>(4.0 * head_scale / half_period) + 4));
    const double panel_tol = abs_tol / static_cast<double>(head_panels + 64);
    double head = 0.0;
    double b_prev = 0.0;
    for (std::size_t k = 0; k < head_panels; ++k) {
        const double hi = zero_at(k);
        head += integrate_gk(integrand, b_prev, hi, panel_tol, rel_tol * 0.1, 2000).value;
        b_prev = hi;
    }

    // tail: half-period panels, alternating for one-signed w
    std::vector<double> partial;
    partial.reserve(96);
    double sum = 0.0;
    double last_mag = 0.0;
    double first_mag = 0.0;
    const std::size_t max_tail = 96;
    for (std::size_t j = 0; j < max_tail; ++j) {
        const double lo = b_prev;
        const double hi = lo + half_period;
        const double p = integrate_gk(integrand, lo, hi, panel_tol, rel_tol * 0.1, 2000).value;
        b_prev = hi;
        sum += p;
        partial.push_back(sum);
        last_mag = std::abs(p);
        if (j == 0) first_mag = std::max(last_mag, 1e-300);
        if (last_mag < 0.25 * std::max(abs_tol, rel_tol * std::abs(head + sum))) {
            return head + sum; // plain convergence, no acceleration needed
        }
    }
    if (last_mag > 0.9 * first_mag) {
        throw QuadratureError(
            "cos_transform_decaying: integrand envelope does not decay (non-integrable "
            "spectrum?)",
            last_mag);
    }
    double acc_err = 0.0;
    const double tail = accelerate_alternating(partial, acc_err);
    const double value = head + tail;
    if (acc_err > std::max(abs_tol, rel_tol * std::abs(value))) {
        throw QuadratureError("cos_transform_decaying: acceleration stalled", acc_err);
    }
    return value;
}

} // namespace bathlab
