#include "apx/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>

#include "apx/errors.hpp"
#include "apx/fourier.hpp"
#include "gauss.hpp"

namespace apx {

namespace {

constexpr int kLevels = 14;                      // finest width 2 pi 2^-14
constexpr std::size_t kCells = std::size_t{1} << 15;
constexpr int kGradedLevels = 30;
constexpr std::size_t kC8Grid = 16384;
constexpr double kC8Exclusion = 1e-6;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double periodic_distance(double x, double y) { return std::abs(wrap_angle(x - y)); }

void add_special(std::vector<SpecialPoint>& pts, SpecialPoint sp) {
    sp.x = wrap_angle(sp.x);
    for (auto& q : pts) {
        if (periodic_distance(q.x, sp.x) < 1e-12) {
            if (sp.graded && (!q.graded || sp.exponent < q.exponent)) q = sp;
            return;
        }
    }
    pts.push_back(sp);
}

}  // namespace

// ------------------------------------------------------------------ Weight

Weight Weight::constant(double c) {
    if (!(c > 0) || !std::isfinite(c)) throw InvalidInput("constant weight must be positive");
    Weight w;
    w.family_ = WeightFamily::constant;
    w.scale_ = c;
    w.finalize();
    return w;
}

Weight Weight::power(double x0, double alpha, double scale) {
    return product({PowerFactor{x0, alpha}}, scale).with_family(WeightFamily::power);
}

Weight Weight::product(std::vector<PowerFactor> factors, double scale) {
    if (!(scale > 0) || !std::isfinite(scale)) throw InvalidInput("weight scale must be positive");
    for (const auto& f : factors)
        if (!std::isfinite(f.alpha) || !std::isfinite(f.x0)) throw InvalidInput("non-finite weight factor");
    Weight w;
    w.family_ = WeightFamily::product;
    w.scale_ = scale;
    w.factors_ = std::move(factors);
    w.finalize();
    return w;
}

Weight Weight::with_family(WeightFamily f) const {
    Weight w = *this;
    w.family_ = f;
    w.finalize();
    return w;
}

Weight Weight::tabulated(std::vector<double> values, std::vector<SpecialPoint> declared, double scale) {
    if (values.size() < 2) throw InvalidInput("tabulated weight needs at least 2 samples");
    if (!(scale > 0)) throw InvalidInput("weight scale must be positive");
    for (double v : values)
        if (!(v >= 0) || !std::isfinite(v)) throw InvalidInput("tabulated weight values must be finite and nonnegative");
    Weight w;
    w.family_ = WeightFamily::tabulated;
    w.scale_ = scale;
    w.table_ = std::move(values);
    w.special_ = std::move(declared);
    w.finalize();
    return w;
}

void Weight::finalize() {
    if (family_ == WeightFamily::power || family_ == WeightFamily::product) {
        special_.clear();
        for (const auto& f : factors_) {
            if (f.alpha == 0.0) continue;
            add_special(special_, {f.x0, f.alpha, true});
        }
        for (const auto& f : factors_) {
            if (f.alpha == 0.0) continue;
            add_special(special_, {f.x0 + kPi, 0.0, false});
        }
    } else if (family_ == WeightFamily::tabulated) {
        std::vector<SpecialPoint> pts;
        for (const auto& sp : special_) add_special(pts, sp);
        special_ = std::move(pts);
    }
    std::sort(special_.begin(), special_.end(), [](const SpecialPoint& a, const SpecialPoint& b) { return a.x < b.x; });

    switch (family_) {
        case WeightFamily::constant: descriptor_ = "constant(" + num(scale_) + ")"; break;
        case WeightFamily::power:
            descriptor_ = "power(x0=" + num(factors_[0].x0) + ",alpha=" + num(factors_[0].alpha) + ")*" + num(scale_);
            break;
        case WeightFamily::product: {
            descriptor_ = "product[";
            for (const auto& f : factors_) descriptor_ += "(" + num(f.x0) + "," + num(f.alpha) + ")";
            descriptor_ += "]*" + num(scale_);
            break;
        }
        case WeightFamily::tabulated: {
            std::size_t h = std::hash<std::string>{}(std::string(reinterpret_cast<const char*>(table_.data()),
                                                                  table_.size() * sizeof(double)));
            descriptor_ = "tabulated(" + std::to_string(table_.size()) + "," + std::to_string(h) + ")";
            for (const auto& sp : special_) descriptor_ += "(" + num(sp.x) + "," + num(sp.exponent) + ")";
            descriptor_ += "*" + num(scale_);
            break;
        }
    }
    cache_ = std::make_shared<WeightCache>();
}

double Weight::operator()(double x) const {
    switch (family_) {
        case WeightFamily::constant: return scale_;
        case WeightFamily::power:
        case WeightFamily::product: {
            double v = scale_;
            for (const auto& f : factors_) {
                if (f.alpha == 0.0) continue;
                const double d = periodic_distance(x, f.x0);
                if (d == 0.0) {
                    if (f.alpha < 0) throw PoleError("weight evaluated at its pole x = " + num(f.x0));
                    return 0.0;
                }
                v *= std::pow(d, f.alpha);
            }
            return v;
        }
        case WeightFamily::tabulated: {
            const std::size_t m = table_.size();
            for (const auto& sp : special_)
                if (sp.graded && sp.exponent < 0 && periodic_distance(x, sp.x) == 0.0)
                    throw PoleError("weight evaluated at its pole x = " + num(sp.x));
            const double t = (wrap_angle(x) + kPi) / (kTwoPi / static_cast<double>(m));
            const double fl = std::floor(t);
            const auto i = static_cast<std::size_t>(fl) % m;
            const double fr = t - fl;
            return scale_ * ((1.0 - fr) * table_[i] + fr * table_[(i + 1) % m]);
        }
    }
    return scale_;
}

bool Weight::has_singularities() const {
    return std::any_of(special_.begin(), special_.end(), [](const SpecialPoint& s) { return s.graded; });
}

double Weight::min_exponent() const {
    double e = 0.0;
    for (const auto& s : special_)
        if (s.graded) e = std::min(e, s.exponent);
    return e;
}

void Weight::require_integrable() const {
    for (const auto& s : special_)
        if (s.graded && s.exponent <= -1.0)
            throw DivergenceError("weight exponent " + num(s.exponent) + " at x = " + num(s.x) +
                                  " is not integrable (needs exponent > -1)");
}

Weight Weight::scaled(double c) const {
    if (!(c > 0)) throw InvalidInput("scale factor must be positive");
    Weight w = *this;
    w.scale_ *= c;
    w.finalize();
    return w;
}

// ------------------------------------------------------- interval machinery

namespace {

/// Cell integrals of gamma^q over kCells uniform cells, with graded panels at special points.
/// Returns empty when the integral diverges.
std::vector<double> cell_integrals(const Weight& w, double q) {
    const auto& sps = w.special_points();
    for (const auto& s : sps)
        if (s.graded && s.exponent * q <= -1.0) return {};
    auto g = [&](double x) {
        const double v = w(x);
        if (q == 1.0) return v;
        return v == 0.0 ? (q < 0 ? std::numeric_limits<double>::infinity() : 0.0) : std::pow(v, q);
    };
    const double h = kTwoPi / static_cast<double>(kCells);
    std::vector<double> out(kCells, 0.0);
    const auto& gl = detail::gauss_legendre(8);
    for (std::size_t i = 0; i < kCells; ++i) {
        const double a = -kPi + h * static_cast<double>(i);
        const double b = a + h;
        // cut points: cell ends plus special points strictly inside
        std::vector<double> cuts{a};
        bool touched = false;
        for (const auto& s : sps) {
            double sx = s.x;
            if (sx < a - 1e-13) sx += kTwoPi;
            if (sx > a + 1e-13 && sx < b - 1e-13) cuts.push_back(sx);
            if (sx >= a - 1e-13 && sx <= b + 1e-13) touched = true;
        }
        if (!touched) {
            double acc = 0.0;
            for (std::size_t k = 0; k < gl.x.size(); ++k) acc += gl.w[k] * g(0.5 * (a + b) + 0.5 * h * gl.x[k]);
            out[i] = 0.5 * h * acc;
            continue;
        }
        cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        auto graded_at = [&](double x) -> const SpecialPoint* {
            for (const auto& s : sps)
                if (s.graded && periodic_distance(x, s.x) < 1e-13) return &s;
            return nullptr;
        };
        std::vector<const SpecialPoint*> at;
        for (double cpt : cuts) at.push_back(graded_at(cpt));
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double lo = cuts[k], hi = cuts[k + 1];
            const SpecialPoint* sl = at[k];
            const SpecialPoint* sh = at[k + 1];
            const bool gl_lo = sl && sl->graded, gl_hi = sh && sh->graded;
            if (!gl_lo && !gl_hi) {
                total += detail::integrate_panels(g, lo, hi, 0.0, 8);
            } else if (gl_lo && gl_hi) {
                const double mid = 0.5 * (lo + hi);
                total += detail::integrate_graded(g, lo, mid - lo, sl->exponent * q, kGradedLevels);
                total += detail::integrate_graded(g, hi, mid - hi, sh->exponent * q, kGradedLevels);
            } else if (gl_lo) {
                total += detail::integrate_graded(g, lo, hi - lo, sl->exponent * q, kGradedLevels);
            } else {
                total += detail::integrate_graded(g, hi, lo - hi, sh->exponent * q, kGradedLevels);
            }
        }
        out[i] = total;
    }
    return out;
}

struct Prefix {
    std::vector<long double> p;
    explicit Prefix(const std::vector<double>& cells) : p(cells.size() + 1, 0.0L) {
        for (std::size_t i = 0; i < cells.size(); ++i) p[i + 1] = p[i] + cells[i];
    }
    /// Sum over `len` cells starting at `start` (periodic, len <= n).
    [[nodiscard]] double sum(long start, long len) const {
        const auto n = static_cast<long>(p.size() - 1);
        long s = start % n;
        if (s < 0) s += n;
        if (len >= n) return static_cast<double>(p[static_cast<std::size_t>(n)]);
        const long e = s + len;
        if (e <= n) return static_cast<double>(p[static_cast<std::size_t>(e)] - p[static_cast<std::size_t>(s)]);
        return static_cast<double>((p[static_cast<std::size_t>(n)] - p[static_cast<std::size_t>(s)]) +
                                   p[static_cast<std::size_t>(e - n)]);
    }
};

const std::vector<double>& gamma_cells(const Weight& w) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<std::vector<double>>> cache;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(w.descriptor());
        if (it != cache.end()) return *it->second;
    }
    w.require_integrable();
    auto cells = std::make_shared<std::vector<double>>(cell_integrals(w, 1.0));
    std::lock_guard lock(mu);
    return *cache.emplace(w.descriptor(), cells).first->second;
}

template <class F>
void for_each_interval(int level, F&& f) {
    const long len = static_cast<long>(kCells >> level);
    const long step = std::max(1L, len / 2);
    const long count = static_cast<long>(kCells) / step;
    for (long j = 0; j < count; ++j) f(j * step, len);
}

/// Intervals of the level's width containing a graded special point at 65 relative offsets.
template <class F>
void for_each_anchored(const Weight& w, int level, F&& f) {
    const long len = static_cast<long>(kCells >> level);
    const double h = kTwoPi / static_cast<double>(kCells);
    for (const auto& sp : w.special_points()) {
        if (!sp.graded) continue;
        const long c0 = std::lround((wrap_angle(sp.x) + kPi) / h);
        for (long j = 0; j <= 64; ++j) f(c0 - (len * j) / 64, len);
    }
}

}  // namespace

// ------------------------------------------------------------- estimators

ApEstimate muckenhoupt_constant(const Weight& w, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("muckenhoupt_constant needs 1 < p < inf");
    auto& c = w.cache();
    {
        std::lock_guard lock(c.mu);
        auto it = c.ap.find(p);
        if (it != c.ap.end()) return it->second;
    }
    ApEstimate est;
    if (w.is_constant()) {
        est.in_class = true;
        est.value = 1.0;
        est.refinement_trend = 1.0;
        est.by_level.assign(kLevels + 1, 1.0);
    } else {
        w.require_integrable();
        const double q = -1.0 / (p - 1.0);
        const auto sigma = cell_integrals(w, q);
        if (sigma.empty()) {
            est.in_class = false;
            est.refinement_trend = std::numeric_limits<double>::infinity();
            est.note = "integral of gamma^(-1/(p-1)) diverges (exponent -alpha/(p-1) <= -1)";
        } else {
            const Prefix pg(gamma_cells(w)), ps(sigma);
            const double h = kTwoPi / static_cast<double>(kCells);
            double sup = 0.0;
            for (int l = 0; l <= kLevels; ++l) {
                const auto visit = [&](long s, long len) {
                    const double width = h * static_cast<double>(len);
                    const double a = pg.sum(s, len) / width;
                    const double b = ps.sum(s, len) / width;
                    sup = std::max(sup, a * std::pow(b, p - 1.0));
                };
                for_each_interval(l, visit);
                for_each_anchored(w, l, visit);
                est.by_level.push_back(sup);
            }
            est.value = sup;
            est.refinement_trend = est.by_level[kLevels] / est.by_level[kLevels - 1];
            est.in_class = std::isfinite(sup) && est.refinement_trend < 1.5;
            if (!est.in_class) est.note = "estimate grows under refinement";
        }
    }
    std::lock_guard lock(c.mu);
    return c.ap.emplace(p, est).first->second;
}

S1Estimate s1_constants(const Weight& w) {
    auto& c = w.cache();
    {
        std::lock_guard lock(c.mu);
        if (c.s1) return *c.s1;
    }
    S1Estimate est;
    if (w.is_constant()) {
        est.in_class = true;
        est.gamma1 = w.scale();
        est.refinement_trend = 1.0;
        est.c8 = w.scale();
    } else {
        w.require_integrable();
        const Prefix pg(gamma_cells(w));
        const double h = kTwoPi / static_cast<double>(kCells);
        std::vector<double> by_level;
        double sup = 0.0;
        for (int l = 0; l <= kLevels; ++l) {
            const auto visit = [&](long s, long len) { sup = std::max(sup, pg.sum(s, len) / (h * static_cast<double>(len))); };
            for_each_interval(l, visit);
            for_each_anchored(w, l, visit);
            by_level.push_back(sup);
        }
        est.gamma1 = sup;
        est.refinement_trend = by_level[kLevels] / by_level[kLevels - 1];
        // essential lower bound on a grid, excluding small balls around declared points
        bool declared_zero = false;
        for (const auto& s : w.special_points())
            if (s.graded && s.exponent > 0) declared_zero = true;
        double mn = std::numeric_limits<double>::infinity();
        const PeriodicGrid grid(kC8Grid);
        for (std::size_t j = 0; j < kC8Grid; ++j) {
            const double x = grid.node(j);
            bool excluded = false;
            for (const auto& s : w.special_points())
                if (s.graded && std::abs(wrap_angle(x - s.x)) < kC8Exclusion) excluded = true;
            if (!excluded) mn = std::min(mn, w(x));
        }
        est.c8 = mn;
        est.in_class = !declared_zero && mn > 0 && std::isfinite(sup);
        if (declared_zero) est.note = "weight has a declared zero, no positive lower bound";
        else if (w.min_exponent() < 0)
            est.note = "sup of averages is taken over the finite dyadic family; it grows under refinement near poles";
    }
    std::lock_guard lock(c.mu);
    c.s1 = est;
    return est;
}

double doubling_constant(const Weight& w) {
    auto& c = w.cache();
    {
        std::lock_guard lock(c.mu);
        if (c.doubling) return *c.doubling;
    }
    double sup = 2.0;
    if (!w.is_constant()) {
        const Prefix pg(gamma_cells(w));
        sup = 0.0;
        for (int l = 1; l <= kLevels; ++l)
            for_each_interval(l, [&](long s, long len) {
                const double in = pg.sum(s, len);
                const double out = pg.sum(s - len / 2, 2 * len);
                if (in > 0) sup = std::max(sup, out / in);
                else sup = std::numeric_limits<double>::infinity();
            });
    }
    std::lock_guard lock(c.mu);
    c.doubling = sup;
    return sup;
}

namespace {

std::pair<double, double> fit_power(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) return {1.0, 1.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double den = n * sxx - sx * sx;
    const double slope = den != 0.0 ? (n * sxy - sx * sy) / den : 1.0;
    double c = 0.0;
    for (auto [x, y] : pts) c = std::max(c, std::exp(y - slope * x));
    return {c, slope};
}

}  // namespace

AinfEstimate ainf_constants(const Weight& w) {
    auto& c = w.cache();
    {
        std::lock_guard lock(c.mu);
        if (c.ainf) return *c.ainf;
    }
    AinfEstimate est{1.0, 1.0, 1.0, 1.0};
    if (!w.is_constant()) {
        const Prefix pg(gamma_cells(w));
        std::vector<std::pair<double, double>> inside, outside;
        constexpr int pieces = 16;
        for (int l = 1; l <= 10; ++l) {
            for_each_interval(l, [&](long s, long len) {
                const double total = pg.sum(s, len);
                if (!(total > 0)) return;
                std::vector<double> m(pieces);
                const long plen = len / pieces;
                for (int i = 0; i < pieces; ++i) m[static_cast<std::size_t>(i)] = pg.sum(s + i * plen, plen);
                std::sort(m.begin(), m.end(), std::greater<>());
                double acc = 0.0;
                for (int k = 1; k < pieces; ++k) {
                    acc += m[static_cast<std::size_t>(k - 1)];
                    inside.emplace_back(std::log(static_cast<double>(k) / pieces), std::log(acc / total));
                }
                for (int k = 2; k <= 8; ++k) {
                    const long elen = k * len;
                    if (elen > static_cast<long>(kCells)) break;
                    outside.emplace_back(std::log(static_cast<double>(k)),
                                         std::log(pg.sum(s - (elen - len) / 2, elen) / total));
                }
            });
        }
        std::tie(est.c7, est.p0) = fit_power(outside);
        std::tie(est.c7_inside, est.p0_inside) = fit_power(inside);
    }
    std::lock_guard lock(c.mu);
    c.ainf = est;
    return est;
}

double weight_l1_norm(const Weight& w) {
    if (w.is_constant()) return kTwoPi * w.scale();
    auto& c = w.cache();
    {
        std::lock_guard lock(c.mu);
        if (c.l1) return *c.l1;
    }
    const auto& cells = gamma_cells(w);
    long double s = 0.0L;
    for (double v : cells) s += v;
    std::lock_guard lock(c.mu);
    c.l1 = static_cast<double>(s);
    return *c.l1;
}

ClassReport classify_weight(const Weight& w, double p) {
    if (!(p >= 1.0)) throw InvalidInput("exponent p must be in [1, inf]");
    w.require_integrable();
    ClassReport r;
    r.p = p;
    r.l1_norm = weight_l1_norm(w);
    r.doubling_c6 = doubling_constant(w);
    r.ainf = ainf_constants(w);
    if (std::isinf(p)) {
        r.in_as = w.is_constant() && w.scale() == 1.0;
        r.summary = r.in_as ? "p = inf with gamma == 1" : "p = inf requires gamma == 1";
    } else if (p == 1.0) {
        r.s1 = s1_constants(w);
        r.in_s1 = r.s1->in_class;
        r.in_as = r.in_s1;
        r.summary = r.in_s1 ? "in S_1" : "not in S_1" + (r.s1->note.empty() ? std::string() : ": " + r.s1->note);
    } else {
        r.ap = muckenhoupt_constant(w, p);
        r.in_ap = r.ap->in_class;
        r.in_as = r.in_ap;
        r.summary = r.in_ap ? "in A_p" : "not in A_p" + (r.ap->note.empty() ? std::string() : ": " + r.ap->note);
    }
    return r;
}

}  // namespace apx
