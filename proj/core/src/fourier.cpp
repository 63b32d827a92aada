#include "apx/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "apx/errors.hpp"
#include "fft.hpp"

namespace apx {

namespace detail {
namespace {

struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

Plans plans_for(std::size_t n) {
    static std::map<std::size_t, Plans> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto* in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    Plans p;
    const int ni = static_cast<int>(n);
    p.forward = fftw_plan_dft_r2c_1d(ni, in, out, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(ni, out, in, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    cache.emplace(n, p);
    return p;
}

struct Buffers {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    explicit Buffers(std::size_t n)
        : real(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
          spec(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {}
    ~Buffers() {
        fftw_free(real);
        fftw_free(spec);
    }
    Buffers(const Buffers&) = delete;
    Buffers& operator=(const Buffers&) = delete;
};

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
    const std::size_t n = x.size();
    const Plans p = plans_for(n);
    Buffers buf(n);
    std::copy(x.begin(), x.end(), buf.real);
    fftw_execute_dft_r2c(p.forward, buf.real, buf.spec);
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) out[k] = {buf.spec[k][0], buf.spec[k][1]};
    return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> half, std::size_t n) {
    const Plans p = plans_for(n);
    Buffers buf(n);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const auto v = k < half.size() ? half[k] : std::complex<double>{};
        buf.spec[k][0] = v.real();
        buf.spec[k][1] = v.imag();
    }
    fftw_execute_dft_c2r(p.backward, buf.spec, buf.real);
    return {buf.real, buf.real + n};
}

}  // namespace detail

double wrap_angle(double x) {
    if (x >= -kPi && x < kPi) return x;
    double y = std::fmod(x + kPi, kTwoPi);
    if (y < 0) y += kTwoPi;
    y -= kPi;
    return y >= kPi ? -kPi : y;
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

PeriodicGrid::PeriodicGrid(std::size_t n_points) : n_(n_points) {
    if (!is_power_of_two(n_points) || n_points < 2)
        throw InvalidInput("grid size must be a power of two >= 2, got " + std::to_string(n_points));
}

std::vector<double> PeriodicGrid::nodes() const {
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
    return x;
}

// ---------------------------------------------------------------- TrigPoly

TrigPoly::TrigPoly(int degree) {
    if (degree < 0) throw InvalidInput("negative degree");
    a_.assign(static_cast<std::size_t>(degree) + 1, 0.0);
    b_.assign(static_cast<std::size_t>(degree) + 1, 0.0);
}

TrigPoly::TrigPoly(double a0, std::vector<double> a, std::vector<double> b) {
    const std::size_t n = std::max(a.size(), b.size());
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    a_.assign(n + 1, 0.0);
    b_.assign(n + 1, 0.0);
    a_[0] = a0;
    for (std::size_t k = 0; k < n; ++k) {
        a_[k + 1] = a[k];
        b_[k + 1] = b[k];
    }
}

TrigPoly TrigPoly::constant(double c) {
    TrigPoly p;
    p.a_[0] = c;
    return p;
}

TrigPoly TrigPoly::cosine(int k, double amp) {
    TrigPoly p(k);
    if (k == 0) p.a_[0] = amp;
    else p.a_[static_cast<std::size_t>(k)] = amp;
    return p;
}

TrigPoly TrigPoly::sine(int k, double amp) {
    TrigPoly p(k);
    if (k > 0) p.b_[static_cast<std::size_t>(k)] = amp;
    return p;
}

int TrigPoly::effective_degree() const {
    for (int k = degree(); k > 0; --k)
        if (a_[static_cast<std::size_t>(k)] != 0.0 || b_[static_cast<std::size_t>(k)] != 0.0) return k;
    return 0;
}

void TrigPoly::set(int k, double ak, double bk) {
    if (k < 0) throw InvalidInput("negative frequency");
    if (k > degree()) {
        a_.resize(static_cast<std::size_t>(k) + 1, 0.0);
        b_.resize(static_cast<std::size_t>(k) + 1, 0.0);
    }
    a_[static_cast<std::size_t>(k)] = ak;
    b_[static_cast<std::size_t>(k)] = k == 0 ? 0.0 : bk;
}

cplx TrigPoly::c(int k) const {
    if (k == 0) return {a_[0], 0.0};
    if (k > degree()) return {};
    return {0.5 * a_[static_cast<std::size_t>(k)], -0.5 * b_[static_cast<std::size_t>(k)]};
}

double TrigPoly::operator()(double x) const {
    const int n = degree();
    if (n == 0) return a_[0];
    const cplx z = std::polar(1.0, x);
    cplx s{a_[static_cast<std::size_t>(n)], -b_[static_cast<std::size_t>(n)]};
    for (int k = n - 1; k >= 1; --k)
        s = s * z + cplx{a_[static_cast<std::size_t>(k)], -b_[static_cast<std::size_t>(k)]};
    s *= z;
    return a_[0] + s.real();
}

TrigPoly TrigPoly::derivative(int r) const {
    if (r < 0) throw InvalidInput("negative derivative order");
    TrigPoly d(degree());
    for (int k = 1; k <= degree(); ++k) {
        // d/dx (a cos + b sin) = k (b cos - a sin); apply r times via the phase (ik)^r.
        const cplx ck{a_[static_cast<std::size_t>(k)], -b_[static_cast<std::size_t>(k)]};
        const double kr = std::pow(static_cast<double>(k), r);
        static constexpr std::array<cplx, 4> phase{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
        const cplx v = ck * phase[static_cast<std::size_t>(r % 4)] * kr;
        d.a_[static_cast<std::size_t>(k)] = v.real();
        d.b_[static_cast<std::size_t>(k)] = -v.imag();
    }
    d.a_[0] = r == 0 ? a_[0] : 0.0;
    return d;
}

TrigPoly TrigPoly::truncated(int n) const {
    TrigPoly t(std::min(n, degree()));
    for (int k = 0; k <= t.degree(); ++k) {
        t.a_[static_cast<std::size_t>(k)] = a_[static_cast<std::size_t>(k)];
        t.b_[static_cast<std::size_t>(k)] = b_[static_cast<std::size_t>(k)];
    }
    return t;
}

TrigPoly TrigPoly::resized(int n) const {
    TrigPoly t(n);
    for (int k = 0; k <= std::min(n, degree()); ++k) {
        t.a_[static_cast<std::size_t>(k)] = a_[static_cast<std::size_t>(k)];
        t.b_[static_cast<std::size_t>(k)] = b_[static_cast<std::size_t>(k)];
    }
    return t;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
    if (o.degree() > degree()) *this = resized(o.degree());
    for (int k = 0; k <= o.degree(); ++k) {
        a_[static_cast<std::size_t>(k)] += o.a_[static_cast<std::size_t>(k)];
        b_[static_cast<std::size_t>(k)] += o.b_[static_cast<std::size_t>(k)];
    }
    return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
    if (o.degree() > degree()) *this = resized(o.degree());
    for (int k = 0; k <= o.degree(); ++k) {
        a_[static_cast<std::size_t>(k)] -= o.a_[static_cast<std::size_t>(k)];
        b_[static_cast<std::size_t>(k)] -= o.b_[static_cast<std::size_t>(k)];
    }
    return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
    for (auto& v : a_) v *= s;
    for (auto& v : b_) v *= s;
    return *this;
}

TrigPoly TrigPoly::times(const TrigPoly& o) const {
    const int n = degree(), m = o.degree();
    std::vector<cplx> out(static_cast<std::size_t>(n + m) + 1);
    auto cc = [](const TrigPoly& p, int k) { return k >= 0 ? p.c(k) : std::conj(p.c(-k)); };
    for (int i = -n; i <= n; ++i) {
        const cplx ci = cc(*this, i);
        if (ci == cplx{}) continue;
        for (int j = -m; j <= m; ++j) {
            const int s = i + j;
            if (s < 0) continue;
            out[static_cast<std::size_t>(s)] += ci * cc(o, j);
        }
    }
    TrigPoly r(n + m);
    r.a_[0] = out[0].real();
    for (int k = 1; k <= n + m; ++k) {
        r.a_[static_cast<std::size_t>(k)] = 2.0 * out[static_cast<std::size_t>(k)].real();
        r.b_[static_cast<std::size_t>(k)] = -2.0 * out[static_cast<std::size_t>(k)].imag();
    }
    return r;
}

double TrigPoly::l2_norm_squared() const {
    double s = 2.0 * a_[0] * a_[0];
    for (int k = 1; k <= degree(); ++k)
        s += a_[static_cast<std::size_t>(k)] * a_[static_cast<std::size_t>(k)] +
             b_[static_cast<std::size_t>(k)] * b_[static_cast<std::size_t>(k)];
    return kPi * s;
}

// ------------------------------------------------------------ SampledFunction

SampledFunction::SampledFunction(PeriodicGrid g, std::vector<double> v, std::optional<FunctionRule> r)
    : grid(g), values(std::move(v)), rule(std::move(r)) {
    if (values.size() != grid.size()) throw InvalidInput("sample count does not match grid");
}

SampledFunction SampledFunction::from_rule(const FunctionRule& rule, std::size_t n_points) {
    PeriodicGrid g(n_points);
    if (auto p = rule.as_poly()) {
        if (static_cast<std::size_t>(2 * p->degree() + 2) <= n_points) {
            auto s = synthesize(*p, g);
            s.rule = rule;
            return s;
        }
    }
    std::vector<double> v(n_points);
    for (std::size_t j = 0; j < n_points; ++j) v[j] = rule.eval(g.node(j));
    return SampledFunction(g, std::move(v), rule);
}

// ----------------------------------------------------------------- Multiplier

Multiplier Multiplier::compose(const Multiplier& o) const {
    const std::size_t n = std::min(m.size(), o.m.size());
    Multiplier r;
    r.m.resize(n);
    for (std::size_t k = 0; k < n; ++k) r.m[k] = m[k] * o.m[k];
    return r;
}

Multiplier Multiplier::power(int r) const {
    Multiplier out;
    out.m.resize(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        cplx v{1.0, 0.0};
        for (int i = 0; i < r; ++i) v *= m[k];
        out.m[k] = v;
    }
    return out;
}

// ------------------------------------------------------ analysis / synthesis

TrigPoly analyze(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4 || n % 2 != 0) throw InvalidInput("analyze needs an even number (>= 4) of samples");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidInput("non-finite sample");
    const auto spec = detail::rfft(values);
    const int deg = static_cast<int>(n / 2) - 1;
    TrigPoly p(deg);
    const double inv = 1.0 / static_cast<double>(n);
    p.set_a0(spec[0].real() * inv);
    for (int k = 1; k <= deg; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        const cplx ck = spec[static_cast<std::size_t>(k)] * (sgn * inv);
        p.set(k, 2.0 * ck.real(), -2.0 * ck.imag());
    }
    return p;
}

TrigPoly analyze(const SampledFunction& f) { return analyze(std::span<const double>(f.values)); }

std::vector<double> synthesize_values(const TrigPoly& p, std::size_t n) {
    if (n < static_cast<std::size_t>(2 * p.degree() + 2))
        throw AliasingError("grid of " + std::to_string(n) + " points cannot represent degree " +
                            std::to_string(p.degree()));
    std::vector<cplx> half(n / 2 + 1);
    for (int k = 0; k <= p.degree(); ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        half[static_cast<std::size_t>(k)] = p.c(k) * sgn;
    }
    return detail::irfft(half, n);
}

SampledFunction synthesize(const TrigPoly& p, const PeriodicGrid& g) {
    return SampledFunction(g, synthesize_values(p, g.size()), FunctionRule::poly(p));
}

TrigPoly apply_multiplier(const TrigPoly& p, const Multiplier& m) {
    if (m.m.size() <= static_cast<std::size_t>(p.degree()))
        throw InvalidInput("multiplier lacks entries up to degree " + std::to_string(p.degree()));
    TrigPoly out(p.degree());
    out.set_a0(p.a0() * m.m[0].real());
    for (int k = 1; k <= p.degree(); ++k) {
        const cplx v = p.c(k) * m.m[static_cast<std::size_t>(k)];
        out.set(k, 2.0 * v.real(), -2.0 * v.imag());
    }
    return out;
}

std::vector<cplx> grid_exponential_sums(std::span<const double> g, std::size_t kmax) {
    const std::size_t n = g.size();
    const auto spec = detail::rfft(g);
    std::vector<cplx> s(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) {
        const std::size_t km = k % n;
        // sum g_j e^{+2 pi i j k / N} = conj(X_k) = X_{N-k}
        const cplx x = km <= n / 2 ? std::conj(spec[km]) : spec[n - km];
        s[k] = (k % 2 == 0) ? x : -x;
    }
    return s;
}

// -------------------------------------------------------------- evaluators

namespace {
constexpr int kLagrangePoints = 12;
constexpr int kDirectDegree = 48;
constexpr std::size_t kOversample = 16;
}  // namespace

PolyEvaluator::PolyEvaluator(const TrigPoly& p) : p_(p) {
    if (p.degree() > kDirectDegree) {
        direct_ = false;
        const std::size_t m = kOversample * next_power_of_two(static_cast<std::size_t>(2 * p.degree() + 2));
        fine_ = synthesize_values(p, m);
        fine_h_ = kTwoPi / static_cast<double>(m);
    }
}

double PolyEvaluator::operator()(double x) const {
    if (direct_) return p_(x);
    static const std::array<double, kLagrangePoints> w = [] {
        std::array<double, kLagrangePoints> r{};
        double c = 1.0;
        for (int j = 0; j < kLagrangePoints; ++j) {
            r[static_cast<std::size_t>(j)] = (j % 2 == 0 ? 1.0 : -1.0) * c;
            c = c * (kLagrangePoints - 1 - j) / (j + 1);
        }
        return r;
    }();
    const auto m = static_cast<long>(fine_.size());
    const double t = (wrap_angle(x) + kPi) / fine_h_;
    const double fl = std::floor(t);
    const long i0 = static_cast<long>(fl) - (kLagrangePoints / 2 - 1);
    const double frac = t - fl;
    if (frac == 0.0) {
        long idx = static_cast<long>(fl) % m;
        if (idx < 0) idx += m;
        return fine_[static_cast<std::size_t>(idx)];
    }
    double num = 0.0, den = 0.0;
    for (int j = 0; j < kLagrangePoints; ++j) {
        long idx = (i0 + j) % m;
        if (idx < 0) idx += m;
        const double d = t - static_cast<double>(i0 + j);
        const double c = w[static_cast<std::size_t>(j)] / d;
        num += c * fine_[static_cast<std::size_t>(idx)];
        den += c;
    }
    return num / den;
}

FunctionEvaluator::FunctionEvaluator(const SampledFunction& f) : rule_(f.rule) {
    if (!rule_) interp_ = std::make_unique<PolyEvaluator>(analyze(f));
}

double FunctionEvaluator::operator()(double x) const { return rule_ ? rule_->eval(x) : (*interp_)(x); }

}  // namespace apx
