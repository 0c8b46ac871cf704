#include "opideal/symfunc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "opideal/errors.hpp"
#include "opideal/parallel.hpp"

namespace opideal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative threshold under which singular values are treated as zero.
constexpr double kSingularClamp = 1e-13;

double lp_value(std::span<const double> xs, double p)
{
    double big = 0.0;
    for (double x : xs) big = std::max(big, std::abs(x));
    if (big == 0.0) return 0.0;
    if (std::isinf(p)) return big;
    if (p == 1.0) {
        double s = 0.0;
        for (double x : xs) s += std::abs(x);
        return s;
    }
    double s = 0.0;
    for (double x : xs) s += std::pow(std::abs(x) / big, p);
    return big * std::pow(s, 1.0 / p);
}

} // namespace

NonincreasingSequence::NonincreasingSequence(std::vector<double> values) : values_(std::move(values))
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] < 0.0)
            throw Error(ErrorCode::InvalidInput,
                        "sequence entry " + std::to_string(i) + " is negative or not finite",
                        values_[i]);
        if (i > 0 && values_[i] > values_[i - 1])
            throw Error(ErrorCode::InvalidInput,
                        "sequence is not nonincreasing at index " + std::to_string(i),
                        values_[i]);
    }
}

NonincreasingSequence NonincreasingSequence::rearranged(std::vector<double> values)
{
    for (double& v : values) v = std::abs(v);
    std::sort(values.begin(), values.end(), std::greater<>());
    return NonincreasingSequence(std::move(values));
}

bool NonincreasingSequence::is_zero() const noexcept
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

SymNormFunc SymNormFunc::schatten(double p)
{
    if (!(p >= 1.0))
        throw Error(ErrorCode::InvalidInput, "Schatten exponent must satisfy 1 <= p <= inf", p);
    return SymNormFunc(Kind::Schatten, p, 0);
}

SymNormFunc SymNormFunc::ky_fan(int k)
{
    if (k < 1) throw Error(ErrorCode::InvalidInput, "Ky Fan index must be >= 1", k);
    return SymNormFunc(Kind::KyFan, 0.0, k);
}

SymNormFunc SymNormFunc::parse(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw Error(ErrorCode::InvalidInput,
                    "norming function must look like schatten:<p> or kyfan:<k>, got '" +
                        std::string(text) + "'");
    const auto head = text.substr(0, colon);
    const auto arg = std::string(text.substr(colon + 1));
    if (head == "schatten") {
        if (arg == "inf" || arg == "infinity") return schatten(kInf);
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != arg.size() || arg.empty())
            throw Error(ErrorCode::InvalidInput, "bad Schatten exponent '" + arg + "'");
        return schatten(p);
    }
    if (head == "kyfan") {
        int k = 0;
        const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), k);
        if (res.ec != std::errc() || res.ptr != arg.data() + arg.size())
            throw Error(ErrorCode::InvalidInput, "bad Ky Fan index '" + arg + "'");
        return ky_fan(k);
    }
    throw Error(ErrorCode::InvalidInput, "unknown norming function '" + std::string(head) + "'");
}

std::string SymNormFunc::name() const
{
    if (kind_ == Kind::KyFan) return "kyfan:" + std::to_string(k_);
    if (std::isinf(p_)) return "schatten:inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, p_);
    return "schatten:" + std::string(buf, res.ptr);
}

double SymNormFunc::operator()(std::span<const double> sorted) const
{
    if (kind_ == Kind::Schatten) return lp_value(sorted, p_);
    const std::size_t top = std::min<std::size_t>(sorted.size(), static_cast<std::size_t>(k_));
    double s = 0.0;
    for (std::size_t i = 0; i < top; ++i) s += sorted[i];
    return s;
}

std::vector<double> SymNormFunc::gradient(std::span<const double> sorted) const
{
    std::vector<double> g(sorted.size(), 0.0);
    if (sorted.empty()) return g;
    if (kind_ == Kind::KyFan) {
        for (std::size_t i = 0; i < std::min<std::size_t>(g.size(), k_); ++i) g[i] = 1.0;
        return g;
    }
    if (std::isinf(p_)) {
        g[0] = 1.0;
        return g;
    }
    if (p_ == 1.0) {
        std::fill(g.begin(), g.end(), 1.0);
        return g;
    }
    const double value = (*this)(sorted);
    if (value == 0.0) return g;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(sorted[i] / value, p_ - 1.0);
    return g;
}

std::optional<SymNormFunc> SymNormFunc::adjoint() const
{
    if (kind_ != Kind::Schatten) return std::nullopt;
    if (p_ == 1.0) return schatten(kInf);
    if (std::isinf(p_)) return schatten(1.0);
    return schatten(p_ / (p_ - 1.0));
}

NonincreasingSequence singular_values(const CMatrix& t)
{
    require_finite(t, "singular_values");
    Eigen::JacobiSVD<CMatrix> svd(t);
    const auto& s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    const double top = out.empty() ? 0.0 : out.front();
    for (double& v : out)
        if (v <= kSingularClamp * top) v = 0.0;
    return NonincreasingSequence(std::move(out));
}

double phi_eval(const SymNormFunc& phi, const NonincreasingSequence& xi) { return phi(xi.values()); }

double phi_norm(const SymNormFunc& phi, const CMatrix& t) { return phi_eval(phi, singular_values(t)); }

namespace {

struct DualObjective {
    const SymNormFunc& phi;
    std::span<const double> eta;

    std::vector<double> profile(const std::vector<double>& t) const
    {
        std::vector<double> xi(t.size());
        double acc = 0.0;
        for (std::size_t j = t.size(); j-- > 0;) {
            acc += t[j];
            xi[j] = acc;
        }
        return xi;
    }

    double value(const std::vector<double>& xi) const
    {
        const double den = phi(xi);
        if (!(den > 0.0)) return -kInf;
        return std::inner_product(xi.begin(), xi.end(), eta.begin(), 0.0) / den;
    }

    // Gradient in the increment coordinates t.
    std::vector<double> gradient(const std::vector<double>& xi) const
    {
        const double den = phi(xi);
        const double num = std::inner_product(xi.begin(), xi.end(), eta.begin(), 0.0);
        const auto dphi = phi.gradient(xi);
        std::vector<double> g(xi.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j) {
            acc += eta[j] / den - num / (den * den) * dphi[j];
            g[j] = acc;
        }
        return g;
    }

    void normalize(std::vector<double>& t) const
    {
        const double den = phi(profile(t));
        if (den > 0.0)
            for (double& v : t) v /= den;
    }
};

double ascend(const DualObjective& obj, std::vector<double>& t, int max_iterations)
{
    obj.normalize(t);
    auto xi = obj.profile(t);
    double f = obj.value(xi);
    double step = 1.0;
    for (int it = 0; it < max_iterations && step > 1e-14; ++it) {
        const auto g = obj.gradient(xi);
        std::vector<double> trial(t.size());
        bool nonzero = false;
        for (std::size_t i = 0; i < t.size(); ++i) {
            trial[i] = std::max(0.0, t[i] + step * g[i]);
            nonzero = nonzero || trial[i] > 0.0;
        }
        if (!nonzero) {
            step *= 0.5;
            continue;
        }
        obj.normalize(trial);
        auto trial_xi = obj.profile(trial);
        const double ft = obj.value(trial_xi);
        if (ft > f) {
            const bool stalled = ft - f <= 1e-15 * std::abs(f);
            t = std::move(trial);
            xi = std::move(trial_xi);
            f = ft;
            if (stalled) break;
            step = std::min(step * 2.0, 1e6);
        } else {
            step *= 0.5;
        }
    }
    return f;
}

} // namespace

DualEstimate adjoint_phi_eval(const SymNormFunc& phi, const NonincreasingSequence& eta,
                              const DualSearchOptions& opts)
{
    if (eta.empty() || eta.is_zero())
        throw Error(ErrorCode::InvalidInput, "adjoint_phi_eval: eta must be nonzero");
    const std::size_t n = eta.size();
    const DualObjective obj{phi, eta.values()};

    DualEstimate out;
    out.estimate = -kInf;
    auto consider = [&](std::vector<double> t) {
        const double f = ascend(obj, t, opts.max_iterations);
        if (f > out.estimate) {
            out.estimate = f;
            out.maximizer = obj.profile(t);
        }
    };

    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> t(n, 0.0);
        t[j] = 1.0;
        consider(std::move(t));
    }
    Rng rng(opts.seed);
    for (int r = 0; r < opts.restarts; ++r) {
        std::vector<double> t(n);
        for (double& v : t) v = rng.uniform();
        consider(std::move(t));
    }

    if (auto dual = phi.adjoint()) {
        out.closed_form = (*dual)(eta.values());
        out.agrees = std::abs(out.estimate - *out.closed_form) <= opts.tolerance * *out.closed_form;
    }
    return out;
}

std::vector<double> dilate(int m, std::span<const double> xi)
{
    if (m < 1) throw Error(ErrorCode::InvalidInput, "dilation factor must be >= 1", m);
    std::vector<double> out;
    out.reserve(xi.size() * static_cast<std::size_t>(m));
    for (double v : xi)
        for (int i = 0; i < m; ++i) out.push_back(v);
    return out;
}

std::vector<double> contract(int m, std::span<const double> xi)
{
    if (m < 1) throw Error(ErrorCode::InvalidInput, "contraction factor must be >= 1", m);
    const std::size_t blocks = (xi.size() + m - 1) / m;
    std::vector<double> out(blocks, 0.0);
    for (std::size_t i = 0; i < xi.size(); ++i) out[i / m] += xi[i];
    for (double& v : out) v /= m;
    return out;
}

std::vector<std::vector<double>> boyd_test_sequences(int seq_len)
{
    std::vector<std::vector<double>> tests;
    for (int len = 1; len <= seq_len; ++len) tests.emplace_back(len, 1.0);
    for (double rho : {0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99}) {
        std::vector<double> v(seq_len);
        for (int i = 0; i < seq_len; ++i) v[i] = std::pow(rho, i);
        tests.push_back(std::move(v));
    }
    for (double s : {0.25, 0.5, 1.0, 2.0}) {
        std::vector<double> v(seq_len);
        for (int i = 0; i < seq_len; ++i) v[i] = std::pow(i + 1.0, -s);
        tests.push_back(std::move(v));
    }
    Rng rng(0xB0D1);
    for (int r = 0; r < 32; ++r) {
        const int len = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(seq_len));
        std::vector<double> v(len);
        for (double& x : v) x = rng.uniform();
        std::sort(v.begin(), v.end(), std::greater<>());
        tests.push_back(std::move(v));
    }
    return tests;
}

double dilation_norm(const SymNormFunc& phi, int m, const std::vector<std::vector<double>>& tests)
{
    double best = 0.0;
    for (const auto& xi : tests) {
        const double den = phi(xi);
        if (den > 0.0) best = std::max(best, phi(dilate(m, xi)) / den);
    }
    return best;
}

double contraction_norm(const SymNormFunc& phi, int m,
                        const std::vector<std::vector<double>>& tests)
{
    double best = 0.0;
    for (const auto& xi : tests) {
        const double den = phi(xi);
        // D_{1/m} maps sorted sequences to sorted sequences.
        if (den > 0.0) best = std::max(best, phi(contract(m, xi)) / den);
    }
    return best;
}

namespace {

void validate_boyd(int m_max, int seq_len)
{
    if (m_max < 2) throw Error(ErrorCode::InvalidInput, "boyd: m_max must be >= 2", m_max);
    if (seq_len < m_max)
        throw Error(ErrorCode::InvalidInput, "boyd: seq_len must be >= m_max", seq_len);
}

void finish_indices(BoydEstimate& est)
{
    est.p_hat = 0.0;
    est.q_hat = kInf;
    for (int m = 2; m <= est.m_max; ++m) {
        const double dn = est.dilation_norms[m - 1];
        const double cn = est.contraction_norms[m - 1];
        const double lm = std::log(static_cast<double>(m));
        const double p = dn > 1.0 ? lm / std::log(dn) : kInf;
        const double q = cn < 1.0 ? -lm / std::log(cn) : kInf;
        est.p_hat = std::max(est.p_hat, p);
        est.q_hat = std::min(est.q_hat, q);
    }
}

} // namespace

BoydEstimate boyd_estimate(const SymNormFunc& phi, int m_max, int seq_len, int jobs)
{
    validate_boyd(m_max, seq_len);
    const auto tests = boyd_test_sequences(seq_len);
    BoydEstimate est;
    est.m_max = m_max;
    est.seq_len = seq_len;
    est.dilation_norms.assign(m_max, 0.0);
    est.contraction_norms.assign(m_max, 0.0);
    parallel_for(1, m_max + 1, jobs, [&](long m) {
        est.dilation_norms[m - 1] = dilation_norm(phi, static_cast<int>(m), tests);
        est.contraction_norms[m - 1] = contraction_norm(phi, static_cast<int>(m), tests);
    });
    finish_indices(est);
    return est;
}

namespace serial {

BoydEstimate boyd_estimate(const SymNormFunc& phi, int m_max, int seq_len)
{
    validate_boyd(m_max, seq_len);
    const auto tests = boyd_test_sequences(seq_len);
    BoydEstimate est;
    est.m_max = m_max;
    est.seq_len = seq_len;
    for (int m = 1; m <= m_max; ++m) {
        est.dilation_norms.push_back(dilation_norm(phi, m, tests));
        est.contraction_norms.push_back(contraction_norm(phi, m, tests));
    }
    finish_indices(est);
    return est;
}

} // namespace serial

} // namespace opideal
