#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opideal/linalg.hpp"

namespace opideal {

/// Finite sequence of nonnegative reals stored in nonincreasing order.
class NonincreasingSequence {
public:
    NonincreasingSequence() = default;

    /// Throws unless `values` is already sorted nonincreasing, finite and >= 0.
    explicit NonincreasingSequence(std::vector<double> values);

    /// Canonical rearrangement: takes absolute values and sorts them.
    static NonincreasingSequence rearranged(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }
    bool is_zero() const noexcept;

private:
    std::vector<double> values_;
};

/// Symmetric norming function: Schatten p (1 <= p <= inf) or Ky Fan k.
class SymNormFunc {
public:
    enum class Kind { Schatten, KyFan };

    static SymNormFunc schatten(double p);
    static SymNormFunc ky_fan(int k);
    /// "schatten:2", "schatten:inf", "kyfan:3"
    static SymNormFunc parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    double p() const noexcept { return p_; }
    int k() const noexcept { return k_; }
    std::string name() const;

    /// Value on a nonincreasing nonnegative sequence.
    double operator()(std::span<const double> sorted) const;

    /// Gradient at a sorted point (a fixed subgradient at kinks).
    std::vector<double> gradient(std::span<const double> sorted) const;

    /// Closed form of the adjoint function when it stays in the family:
    /// Schatten p -> Schatten q with 1/p + 1/q = 1.
    std::optional<SymNormFunc> adjoint() const;

private:
    SymNormFunc(Kind kind, double p, int k) : kind_(kind), p_(p), k_(k) {}

    Kind kind_;
    double p_;
    int k_;
};

NonincreasingSequence singular_values(const CMatrix& t);

double phi_eval(const SymNormFunc& phi, const NonincreasingSequence& xi);
double phi_norm(const SymNormFunc& phi, const CMatrix& t);

struct DualSearchOptions {
    int restarts = 16;
    int max_iterations = 4000;
    /// Relative agreement required between the numeric estimate and a
    /// closed form, when one exists.
    double tolerance = 1e-3;
    std::uint64_t seed = 20070601;
};

struct DualEstimate {
    double estimate = 0.0;                 // numeric sup (a lower bound)
    std::optional<double> closed_form;     // exact value for Schatten kinds
    std::vector<double> maximizer;         // best sorted xi found, Phi(xi) = 1
    bool agrees = true;                    // |estimate - closed| <= tol * closed
};

/// Adjoint function Phi^*(eta) = sup over sorted xi >= 0 of <xi, eta> / Phi(xi).
///
/// The sup is approximated by projected gradient ascent in the increment
/// coordinates xi_j = t_j + t_{j+1} + ..., t >= 0, started from every step
/// sequence and from `opts.restarts` random points.
DualEstimate adjoint_phi_eval(const SymNormFunc& phi, const NonincreasingSequence& eta,
                              const DualSearchOptions& opts = {});

/// Repeats each entry m times.
std::vector<double> dilate(int m, std::span<const double> xi);
/// Averages consecutive blocks of m entries (zero padded to a multiple of m).
std::vector<double> contract(int m, std::span<const double> xi);

struct BoydEstimate {
    double p_hat = 0.0;
    double q_hat = 0.0;
    int m_max = 0;
    int seq_len = 0;
    /// dilation_norms[m - 1] = ||D_m||, contraction_norms[m - 1] = ||D_{1/m}||.
    std::vector<double> dilation_norms;
    std::vector<double> contraction_norms;
};

/// Test sequences over which the operator norms of D_m and D_{1/m} are
/// maximized: all step sequences up to `seq_len`, geometric and power-law
/// profiles, and a fixed batch of random sorted sequences.
std::vector<std::vector<double>> boyd_test_sequences(int seq_len);

double dilation_norm(const SymNormFunc& phi, int m, const std::vector<std::vector<double>>& tests);
double contraction_norm(const SymNormFunc& phi, int m,
                        const std::vector<std::vector<double>>& tests);

/// Boyd index estimates from a finite scan m = 2..m_max. The scan over m is
/// parallel when jobs > 1; results do not depend on the thread count.
BoydEstimate boyd_estimate(const SymNormFunc& phi, int m_max, int seq_len, int jobs = 1);

namespace serial {
/// Single-threaded reference for opideal::boyd_estimate.
BoydEstimate boyd_estimate(const SymNormFunc& phi, int m_max, int seq_len);
} // namespace serial

} // namespace opideal
