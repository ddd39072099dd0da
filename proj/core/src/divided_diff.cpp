#include "nsm/divided_diff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsm {

namespace {

constexpr double kSeriesSwitch = 1e-3;   // |gap * t| below this -> centered series
constexpr int kMaxNodes = 6;
constexpr int kMaxSeriesTerms = 48;

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Centered Taylor evaluation, valid for tightly clustered nodes (and exact at t=0).
complex series_dd(std::span<const complex> nodes, double t) {
    const int nn = static_cast<int>(nodes.size());
    complex mean = 0.0;
    for (auto x : nodes) mean += x;
    mean /= static_cast<double>(nn);

    complex delta[kMaxNodes];
    for (int i = 0; i < nn; ++i) delta[i] = nodes[i] - mean;

    // h[m] accumulates the complete homogeneous symmetric polynomials of the deltas.
    complex h[kMaxSeriesTerms + 1] = {};
    h[0] = 1.0;
    for (int j = 0; j < nn; ++j)
        for (int m = 1; m <= kMaxSeriesTerms; ++m) h[m] += delta[j] * h[m - 1];

    // sum_m h_m t^{nn-1+m} / (nn-1+m)!
    const int base = nn - 1;
    double tpow = 1.0;
    double fact = 1.0;
    for (int j = 1; j <= base; ++j) {
        tpow *= t;
        fact *= j;
    }
    complex sum = 0.0;
    for (int m = 0; m <= kMaxSeriesTerms; ++m) {
        const complex term = h[m] * (tpow / fact);
        sum += term;
        if (std::abs(term) <= 1e-20 * std::abs(sum) && m >= 2) break;
        tpow *= t;
        fact *= base + m + 1;
    }
    return std::exp(mean * t) * sum;
}

complex dd_impl(std::span<const complex> nodes, double t) {
    const int nn = static_cast<int>(nodes.size());
    if (nn == 1) return std::exp(nodes[0] * t);

    // Find the best separated pair; it anchors the recurrence split.
    int bi = 0, bj = 1;
    double best = 0.0;
    for (int i = 0; i < nn; ++i)
        for (int j = i + 1; j < nn; ++j) {
            const double s = std::abs(nodes[i] - nodes[j]);
            if (s > best) {
                best = s;
                bi = i;
                bj = j;
            }
        }
    if (best * std::abs(t) < kSeriesSwitch) return series_dd(nodes, t);

    // dd[x_bi, rest, x_bj] = (dd[rest, x_bj] - dd[x_bi, rest]) / (x_bj - x_bi)
    complex left[kMaxNodes], right[kMaxNodes];
    int m = 0;
    for (int i = 0; i < nn; ++i) {
        if (i == bi || i == bj) continue;
        left[m] = right[m] = nodes[i];
        ++m;
    }
    left[m] = nodes[bi];
    right[m] = nodes[bj];
    const auto lo = dd_impl({left, static_cast<size_t>(nn - 1)}, t);
    const auto hi = dd_impl({right, static_cast<size_t>(nn - 1)}, t);
    return (hi - lo) / (nodes[bj] - nodes[bi]);
}

void check_input(std::span<const complex> nodes, double t, size_t max_nodes) {
    if (nodes.empty()) throw std::domain_error("exp_divided_diff: empty node list");
    if (nodes.size() > max_nodes) throw std::domain_error("exp_divided_diff: too many nodes");
    if (!std::isfinite(t)) throw std::domain_error("exp_divided_diff: nonfinite t");
    for (auto x : nodes)
        if (!finite(x)) throw std::domain_error("exp_divided_diff: nonfinite node");
}

}  // namespace

complex exp_divided_diff(std::span<const complex> nodes, double t) {
    check_input(nodes, t, kMaxNodes);
    return dd_impl(nodes, t);
}

// Leibniz identity: (z f)[x_0..x_n] = x_j f[x_0..x_n] + f[x != j]; symmetrize over j.
complex zexp_divided_diff(std::span<const complex> nodes, double t) {
    check_input(nodes, t, kMaxNodes - 1);
    const int nn = static_cast<int>(nodes.size());
    const complex all = dd_impl(nodes, t);
    if (nn == 1) return nodes[0] * all;
    complex acc = 0.0;
    complex rest[kMaxNodes];
    for (int j = 0; j < nn; ++j) {
        int m = 0;
        for (int i = 0; i < nn; ++i)
            if (i != j) rest[m++] = nodes[i];
        acc += nodes[j] * all + dd_impl({rest, static_cast<size_t>(nn - 1)}, t);
    }
    return acc / static_cast<double>(nn);
}

complex z2exp_divided_diff(std::span<const complex> nodes, double t) {
    check_input(nodes, t, kMaxNodes - 1);
    const int nn = static_cast<int>(nodes.size());
    const complex all = dd_impl(nodes, t);
    if (nn == 1) return nodes[0] * nodes[0] * all;
    // (z^2 f)[..] = x_j (z f)[..] + (z f)[x != j], using the exact zexp values.
    complex acc = 0.0;
    complex rest[kMaxNodes];
    for (int j = 0; j < nn; ++j) {
        int m = 0;
        for (int i = 0; i < nn; ++i)
            if (i != j) rest[m++] = nodes[i];
        const complex zf_rest = zexp_divided_diff({rest, static_cast<size_t>(nn - 1)}, t);
        acc += nodes[j] * (nodes[j] * all + dd_impl({rest, static_cast<size_t>(nn - 1)}, t)) + zf_rest;
    }
    return acc / static_cast<double>(nn);
}

ExpDividedDiffs exp_divided_diffs(std::span<const complex> nodes, double t) {
    check_input(nodes, t, 3);
    ExpDividedDiffs out;
    out.t = t;
    out.nodes.assign(nodes.begin(), nodes.end());
    out.dd0 = std::exp(nodes[0] * t);
    if (nodes.size() >= 2) out.dd1 = dd_impl(nodes.first(2), t);
    if (nodes.size() >= 3) out.dd2 = dd_impl(nodes.first(3), t);
    return out;
}

}  // namespace nsm
