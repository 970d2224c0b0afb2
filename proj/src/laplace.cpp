#include "bathlab/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bathlab {

namespace {

using cd = std::complex<double>;

// De Hoog, Knight & Stokes (1982): Fourier series on the Bromwich line,
// accelerated by the quotient-difference continued fraction.
double de_hoog(const LaplaceImage& F, double t, int M, double tol, double time_scale,
               double alpha) {
    if (!(t > 0.0)) throw std::invalid_argument("inverse_laplace: t must be > 0");
    if (M < 4) throw std::invalid_argument("inverse_laplace: node count too small");

    const double T = time_scale * t;
    const double gamma = alpha - std::log(tol) / (2.0 * T);
    const int n2 = 2 * M;

    std::vector<cd> a(n2 + 1);
    for (int j = 0; j <= n2; ++j) {
        const cd s(gamma, static_cast<double>(j) * M_PI / T);
        a[j] = F(s);
    }
    a[0] *= 0.5;

    // quotient-difference table -> continued fraction coefficients d;
    // e_r^(i) valid for i <= 2M - 2r, q_r^(i) for i <= 2M - 2r + 1
    std::vector<std::vector<cd>> e(n2 + 1, std::vector<cd>(M + 1, cd(0.0, 0.0)));
    std::vector<std::vector<cd>> q(n2 + 1, std::vector<cd>(M + 1, cd(0.0, 0.0)));
    constexpr cd tiny(1e-290, 0.0);
    for (int i = 0; i < n2; ++i) {
        cd denom = (a[i] == cd(0.0, 0.0)) ? tiny : a[i];
        q[i][1] = a[i + 1] / denom;
    }
    for (int r = 1; r <= M; ++r) {
        if (r >= 2) {
            for (int i = 0; i <= 2 * M - 2 * r + 1; ++i) {
                cd denom = (e[i][r - 1] == cd(0.0, 0.0)) ? tiny : e[i][r - 1];
                q[i][r] = q[i + 1][r - 1] * e[i + 1][r - 1] / denom;
            }
        }
        for (int i = 0; i <= 2 * M - 2 * r; ++i)
            e[i][r] = q[i + 1][r] - q[i][r] + e[i + 1][r - 1];
    }
    std::vector<cd> d(n2 + 1);
    d[0] = a[0];
    for (int m = 1; m <= M; ++m) {
        d[2 * m - 1] = -q[0][m];
        d[2 * m] = -e[0][m];
    }

    // evaluate the continued fraction at z = exp(i pi t / T)
    const cd z = std::polar(1.0, M_PI * t / T);
    cd A_prev2(0.0, 0.0), A_prev = d[0];
    cd B_prev2(1.0, 0.0), B_prev(1.0, 0.0);
    cd A_cur = A_prev, B_cur = B_prev;
    for (int n = 1; n <= n2; ++n) {
        cd dn = d[n];
        if (n == n2) {
            // remainder refinement for the final level
            const cd h = 0.5 * (cd(1.0, 0.0) + z * (d[n2 - 1] - d[n2]));
            const cd rad = std::sqrt(cd(1.0, 0.0) + z * d[n2] / (h * h));
            dn = (-h * (cd(1.0, 0.0) - rad)) / z; // fold R into the same recurrence
        }
        A_cur = A_prev + dn * z * A_prev2;
        B_cur = B_prev + dn * z * B_prev2;
        A_prev2 = A_prev;
        A_prev = A_cur;
        B_prev2 = B_prev;
        B_prev = B_cur;
    }
    const cd ratio = A_cur / B_cur;
    return std::exp(gamma * t) / T * ratio.real();
}

} // namespace

double inverse_laplace(const LaplaceImage& F, double t, const InverseLaplaceOptions& opts) {
    return de_hoog(F, t, opts.node_count, opts.tol, opts.time_scale, opts.alpha);
}

CheckedInversion inverse_laplace_checked(const LaplaceImage& F, double t,
                                         const InverseLaplaceOptions& opts, double flag_tol) {
    CheckedInversion out;
    out.value = de_hoog(F, t, opts.node_count, opts.tol, opts.time_scale, opts.alpha);
    const int m_check = opts.node_count + opts.node_count / 2;
    const double check = de_hoog(F, t, m_check, opts.tol, opts.time_scale, opts.alpha);
    out.check_diff = std::abs(out.value - check);
    out.flagged = out.check_diff > flag_tol;
    return out;
}

} // namespace bathlab
