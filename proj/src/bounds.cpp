#include "nsv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "nsv/error.hpp"

namespace nsv {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

void require_d2(const BoundsInput& in, const char* what) {
    if (in.d != 2) throw WrongDimension(std::string(what) + " is a two-dimensional estimate (d = " + std::to_string(in.d) + ")");
}

void require_d3(const BoundsInput& in, const char* what) {
    if (in.d != 3) throw WrongDimension(std::string(what) + " is a three-dimensional estimate (d = " + std::to_string(in.d) + ")");
}

// (ln x + shift)^{1/3}, or +inf where the bracket is not positive and the branch says nothing.
double log_branch(double factor, double shift, double x) {
    const double inner = std::log(x) + shift;
    if (inner <= 0.0) return inf;
    return factor * std::cbrt(x * x) * std::cbrt(inner);
}

}  // namespace

std::string_view to_string(Geometry g) noexcept {
    return g == Geometry::torus ? "torus" : "bounded-domain";
}

Geometry geometry_from_string(std::string_view name) {
    if (name == "torus") return Geometry::torus;
    if (name == "bounded-domain" || name == "domain") return Geometry::bounded_domain;
    throw InvalidParameter("unknown geometry '" + std::string(name) + "' (expected torus or bounded-domain)");
}

std::string_view to_string(Validity v) noexcept {
    switch (v) {
        case Validity::ok: return "ok";
        case Validity::out_of_range: return "out-of-range";
        case Validity::modulo_constant: return "modulo-constant";
    }
    return "ok";
}

void BoundsInput::validate() const {
    std::vector<std::string> problems;
    auto positive = [&](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) problems.push_back(std::string(name) + " must be positive and finite (got " + fmt(v) + ")");
    };
    if (d != 2 && d != 3) problems.push_back("d must be 2 or 3 (got " + std::to_string(d) + ")");
    positive(nu, "nu");
    positive(lambda1, "lambda1");
    positive(domain_measure, "domain_measure");
    if (!(std::isfinite(alpha) && alpha >= 0.0)) problems.push_back("alpha must be nonnegative and finite (got " + fmt(alpha) + ")");
    if (!(std::isfinite(g_norm) && g_norm >= 0.0)) problems.push_back("g_norm must be nonnegative and finite (got " + fmt(g_norm) + ")");
    if (d == 2 && geometry == Geometry::torus && lambda1 > 0.0 && domain_measure > 0.0) {
        const double product = lambda1 * domain_measure;
        if (std::abs(product - 4.0 * pi * pi) > 1e-9 * 4.0 * pi * pi)
            problems.push_back("on a square 2D torus lambda1 * domain_measure = 4 pi^2 (got " + fmt(product) + ")");
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

double BoundsInput::G() const noexcept {
    const double scale = d == 3 ? std::pow(lambda1, 0.75) : lambda1;
    return g_norm / (scale * nu * nu);
}

double BoundsInput::calG() const noexcept { return g_norm * domain_measure / (nu * nu); }

double ConstantsTable::c_lt(int d, Geometry g) {
    if (d == 2) return g == Geometry::torus ? 3.0 * pi / 32.0 : 1.456 / (2.0 * pi);
    if (d == 3) {
        if (g == Geometry::torus) return 5.0 / 3.0 * std::cbrt(std::pow(2.0 / pi, 2.0));
        return 5.0 / 6.0 * std::cbrt(2.0) * std::pow(pi, -4.0 / 3.0) * std::cbrt(1.456 * 1.456);
    }
    throw WrongDimension("no Lieb-Thirring constant for d = " + std::to_string(d));
}

double ConstantsTable::c_d(int d) {
    if (d == 2) return std::sqrt(0.5);
    if (d == 3) return std::sqrt(2.0 / 3.0);
    throw WrongDimension("no c_d for d = " + std::to_string(d));
}

double ConstantsTable::k1() noexcept { return 16.0 * std::sqrt(pi); }
double ConstantsTable::k1_prime() noexcept { return std::pow(2.0, 3.75) * std::sqrt(pi); }
double ConstantsTable::k2() noexcept { return 3.0 * std::log(2.0) + 2.0; }

double ConstantsTable::classical_domain() noexcept {
    return std::sqrt(c_lt(2, Geometry::bounded_domain)) / (2.0 * std::sqrt(2.0) * pi);
}
double ConstantsTable::linear_domain() noexcept {
    return std::sqrt(c_lt(2, Geometry::bounded_domain)) / (std::sqrt(2.0) * pi);
}
double ConstantsTable::linear_torus() noexcept {
    return std::sqrt(c_lt(2, Geometry::torus) / 2.0) / (pi * pi);
}
double ConstantsTable::classical_torus() noexcept {
    return std::sqrt(c_lt(2, Geometry::torus)) / (2.0 * pi * pi);
}
double ConstantsTable::log_factor() noexcept {
    return 2.0 / pi * std::cbrt(std::pow(std::sqrt(2.0) * k1(), 2.0));
}
double ConstantsTable::log_shift() noexcept { return k2() / 2.0 + std::log(std::sqrt(2.0) * k1()); }
double ConstantsTable::classical_log_factor() noexcept {
    return std::sqrt(2.0) / pi * std::cbrt(std::pow(std::sqrt(2.0) * k1_prime(), 2.0));
}
double ConstantsTable::classical_log_shift() noexcept {
    return k2() / 2.0 + std::log(std::sqrt(2.0) * k1_prime());
}

double alpha0(const BoundsInput& in) {
    const double cg = in.calG();
    if (cg <= 0.0) return inf;
    return in.geometry == Geometry::torus ? in.domain_measure / (pi * pi * cg)
                                          : in.domain_measure / (2.0 * pi * cg);
}

BoundEntry bound_thm23(const BoundsInput& in) {
    BoundEntry e{"alpha-quadratic", "nsv_alpha_quadratic", 0.0, Validity::ok, {}, {}};
    const double a = in.alpha_lambda1();
    if (a <= 0.0) {
        e.value = inf;
        e.validity = Validity::out_of_range;
        e.reason = "alpha = 0: the estimate diverges";
        return e;
    }
    const double g = in.G();
    if (in.d == 2)
        e.value = (a + 1.0) * (a + 1.0) / (8.0 * pi * a) * g * g;
    else if (in.d == 3)
        e.value = (a + 1.0) * (a + 1.0) / (6.0 * pi * std::pow(a, 1.5)) * g * g;
    else
        throw WrongDimension("d must be 2 or 3 (got " + std::to_string(in.d) + ")");
    return e;
}

BoundEntry bound_thm27_3d(const BoundsInput& in, double C) {
    require_d3(in, "the G^{5/2} bound");
    BoundEntry e{"alpha-3d", "nsv3d_alpha", 0.0, Validity::modulo_constant, "constant C set to " + fmt(C), {}};
    const double a = in.alpha_lambda1();
    if (a <= 0.0) {
        e.value = inf;
        e.validity = Validity::out_of_range;
        e.reason = "alpha = 0: the estimate diverges";
        return e;
    }
    const double g = in.G();
    e.value = C * (1.0 + a) * std::pow(g, 2.5) * ((1.0 + a) * std::pow(a, -0.75) * std::pow(g, 1.5) + 1.0);
    return e;
}

BoundEntry symmetric_form(const BoundsInput& in) {
    require_d3(in, "the symmetric form");
    BoundEntry e{"symmetric-3d", "nsv3d_symmetric", 0.0, Validity::modulo_constant, "unspecified constant set to 1", {}};
    const double a = in.alpha_lambda1();
    if (a <= 0.0) {
        e.value = inf;
        e.validity = Validity::out_of_range;
        e.reason = "alpha = 0: the estimate diverges";
        return e;
    }
    const double s = std::pow(a, -0.75);
    const double g2 = in.G() * in.G();
    e.branch = s <= g2 ? "(alpha lambda1)^{-3/4}" : "G^2";
    e.value = s * g2 * std::min(s, g2);
    return e;
}

BoundEntry bound_2d_quadratic(const BoundsInput& in) {
    require_d2(in, "the quadratic bound");
    const double g = in.G();
    return {"quadratic-2d", "nsv2d_quadratic",
            (in.alpha_lambda1() + 1.0) * ConstantsTable::c_lt(2, in.geometry) / 2.0 * g * g,
            Validity::ok, {}, {}};
}

BoundEntry bound_2d_linear(const BoundsInput& in) {
    require_d2(in, "the linear bound");
    const bool torus = in.geometry == Geometry::torus;
    BoundEntry e{"linear-2d", torus ? "nsv2d_linear_torus" : "nsv2d_linear_domain", 0.0, Validity::ok, {}, {}};
    e.value = (torus ? ConstantsTable::linear_torus() : ConstantsTable::linear_domain()) * in.calG();
    const double a0 = alpha0(in);
    if (in.alpha > a0) {
        e.validity = Validity::out_of_range;
        e.reason = "alpha = " + fmt(in.alpha) + " exceeds alpha0 = " + fmt(a0);
    }
    return e;
}

BoundEntry bound_2d_log(const BoundsInput& in) {
    require_d2(in, "the logarithmic bound");
    if (in.geometry != Geometry::torus) throw InvalidParameter("the logarithmic bound needs torus geometry");
    const double cg = in.calG();
    if (!(cg > 0.0)) throw InvalidParameter("the logarithmic bound needs calG > 0 (got " + fmt(cg) + ")");
    BoundEntry e{"log-2d", "nsv2d_log_torus", 0.0, Validity::ok, {}, {}};
    const double linear = ConstantsTable::linear_torus() * cg;
    const double logb = log_branch(ConstantsTable::log_factor(), ConstantsTable::log_shift(), cg);
    e.branch = linear <= logb ? "linear" : "logarithmic";
    e.value = std::min(linear, logb);
    const double a0 = alpha0(in);
    if (in.alpha > a0) {
        e.validity = Validity::out_of_range;
        e.reason = "alpha = " + fmt(in.alpha) + " exceeds alpha0 = " + fmt(a0);
    }
    return e;
}

ClassicalBounds classical_ns_bounds(const BoundsInput& in) {
    require_d2(in, "the classical bounds");
    if (in.alpha != 0.0) throw WrongRegime("classical Navier-Stokes bounds need alpha = 0 (got " + fmt(in.alpha) + ")");
    ClassicalBounds out;
    const double cg = in.calG();
    out.lieb = {"classical-lieb", "ns2d_lieb",
                std::sqrt(ConstantsTable::c_lt(2, in.geometry)) / (2.0 * std::sqrt(2.0) * pi) * cg,
                Validity::ok, {}, {}};
    out.min = out.lieb.value;
    if (in.geometry == Geometry::torus) {
        const double linear = ConstantsTable::classical_torus() * cg;
        out.torus = BoundEntry{"classical-torus", "ns2d_torus_linear", linear, Validity::ok, {}, {}};
        BoundEntry m{"classical-torus-log", "ns2d_torus_log", 0.0, Validity::ok, {}, {}};
        const double logb = cg > 0.0 ? log_branch(ConstantsTable::classical_log_factor(),
                                                  ConstantsTable::classical_log_shift(), cg)
                                     : inf;
        m.branch = linear <= logb ? "linear" : "logarithmic";
        m.value = std::min(linear, logb);
        out.log_min = m;
        out.min = std::min({out.min, linear, m.value});
    }
    return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    auto bracket = [&] { return "[" + fmt(lo) + ", " + fmt(hi) + "]"; };
    if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0.0) == (fhi > 0.0))
        throw NumericalError("bisection: no sign change on " + bracket());
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) return 0.5 * (lo + hi);
    }
    throw NumericalError("bisection did not converge on " + bracket());
}

Thresholds thresholds(ConstantSet constants) {
    const bool printed = constants == ConstantSet::printed;
    const double factor = printed ? 7.46 : ConstantsTable::log_factor();
    const double shift = printed ? 5.74 : ConstantsTable::log_shift();
    const double linear = printed ? 0.039 : ConstantsTable::linear_torus();
    const double c_factor = printed ? 4.7 : ConstantsTable::classical_log_factor();
    const double c_shift = printed ? 5.56 : ConstantsTable::classical_log_shift();
    const double c_linear = printed ? 0.028 : ConstantsTable::classical_torus();

    // Everything is solved in s = ln x, where the roots are well separated.
    auto root = [](const std::function<double(double)>& f, double lo, double hi) {
        return std::exp(bisect([&](double s) { return f(std::exp(s)); }, std::log(lo), std::log(hi), 1e-14));
    };
    Thresholds t;
    t.constants = constants;
    t.g0 = root([&](double x) { return x - log_branch(factor, shift, x); }, 10.0, 1e8);
    t.g0_alt = root([&](double x) { return x - log_branch(factor, 5.24, x); }, 10.0, 1e8);
    t.crossover_log = root([&](double x) { return linear * x - log_branch(factor, shift, x); }, 1e3, 1e14);
    t.crossover_classical = root([&](double x) { return c_linear * x - log_branch(c_factor, c_shift, x); }, 1e3, 1e14);
    return t;
}

DimBoundReport evaluate_bounds(const BoundsInput& in) {
    in.validate();
    DimBoundReport r;
    r.input = in;
    r.G = in.G();
    r.calG = in.calG();
    r.alpha_lambda1 = in.alpha_lambda1();
    r.entries.push_back(bound_thm23(in));
    if (in.d == 3) {
        r.entries.push_back(bound_thm27_3d(in));
        r.entries.push_back(symmetric_form(in));
        return r;
    }
    r.alpha0 = alpha0(in);
    r.entries.push_back(bound_2d_quadratic(in));
    r.entries.push_back(bound_2d_linear(in));
    if (in.geometry == Geometry::torus) {
        if (r.calG > 0.0) {
            r.entries.push_back(bound_2d_log(in));
        } else {
            r.entries.push_back({"log-2d", "nsv2d_log_torus", 0.0, Validity::out_of_range, "calG = 0", {}});
        }
    }
    if (in.alpha == 0.0) {
        const auto c = classical_ns_bounds(in);
        r.entries.push_back(c.lieb);
        if (c.torus) r.entries.push_back(*c.torus);
        if (c.log_min) r.entries.push_back(*c.log_min);
    }
    return r;
}

namespace {

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const DimBoundReport& report) {
    using nlohmann::json;
    const auto& in = report.input;
    json j;
    j["input"] = {{"d", in.d},
                  {"nu", in.nu},
                  {"alpha", in.alpha},
                  {"g_norm", in.g_norm},
                  {"lambda1", in.lambda1},
                  {"domain_measure", in.domain_measure},
                  {"geometry", std::string(to_string(in.geometry))}};
    j["G"] = report.G;
    j["calG"] = report.calG;
    j["alpha_lambda1"] = report.alpha_lambda1;
    j["alpha0"] = report.alpha0 ? number_or_null(*report.alpha0) : json(nullptr);
    j["entries"] = json::array();
    for (const auto& e : report.entries) {
        json x = {{"name", e.name},
                  {"formula", e.formula},
                  {"value", number_or_null(e.value)},
                  {"validity", std::string(to_string(e.validity))}};
        if (!e.reason.empty()) x["reason"] = e.reason;
        if (!e.branch.empty()) x["branch"] = e.branch;
        j["entries"].push_back(std::move(x));
    }
    return j;
}

nlohmann::json constants_json() {
    using C = ConstantsTable;
    return {{"c_lt_r2", C::c_lt(2, Geometry::bounded_domain)},
            {"c_lt_t2", C::c_lt(2, Geometry::torus)},
            {"c_lt_r3", C::c_lt(3, Geometry::bounded_domain)},
            {"c_lt_t3", C::c_lt(3, Geometry::torus)},
            {"c2", C::c_d(2)},
            {"c3", C::c_d(3)},
            {"k1", C::k1()},
            {"k1_prime", C::k1_prime()},
            {"k2", C::k2()},
            {"classical_domain", C::classical_domain()},
            {"linear_domain", C::linear_domain()},
            {"linear_torus", C::linear_torus()},
            {"classical_torus", C::classical_torus()},
            {"log_factor", C::log_factor()},
            {"log_shift", C::log_shift()},
            {"classical_log_factor", C::classical_log_factor()},
            {"classical_log_shift", C::classical_log_shift()}};
}

nlohmann::json to_json(const Thresholds& t) {
    return {{"constants", t.constants == ConstantSet::printed ? "printed" : "exact"},
            {"G0", t.g0},
            {"G0_alt", t.g0_alt},
            {"crossover_log_vs_linear", t.crossover_log},
            {"crossover_classical", t.crossover_classical}};
}

void write_bounds_table(std::ostream& os, const DimBoundReport& report) {
    os << "d = " << report.input.d << ", geometry = " << to_string(report.input.geometry)
       << ", G = " << fmt(report.G) << ", calG = " << fmt(report.calG)
       << ", alpha lambda1 = " << fmt(report.alpha_lambda1);
    if (report.alpha0) os << ", alpha0 = " << fmt(*report.alpha0);
    os << '\n';

    std::size_t wn = 4, wf = 7, wv = 5;
    std::vector<std::string> values;
    for (const auto& e : report.entries) {
        values.push_back(fmt(e.value));
        wn = std::max(wn, e.name.size());
        wf = std::max(wf, e.formula.size());
        wv = std::max(wv, values.back().size());
    }
    os << std::left << std::setw(int(wn)) << "name" << "  " << std::setw(int(wf)) << "formula" << "  "
       << std::right << std::setw(int(wv)) << "value" << "  validity\n";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto& e = report.entries[i];
        os << std::left << std::setw(int(wn)) << e.name << "  " << std::setw(int(wf)) << e.formula << "  "
           << std::right << std::setw(int(wv)) << values[i] << "  " << to_string(e.validity);
        if (!e.branch.empty()) os << " [" << e.branch << "]";
        if (!e.reason.empty()) os << " (" << e.reason << ")";
        os << '\n';
    }
}

}  // namespace nsv
