#include "arlab/trig_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "arlab/errors.hpp"

namespace arlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& field) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ContractError("TrigPolynomial: cannot parse '" + field + "'");
    }
    if (used != field.size()) throw ContractError("TrigPolynomial: trailing characters in '" + field + "'");
    return value;
}

}  // namespace

TrigPolynomial::TrigPolynomial(double a0, std::vector<double> a, std::vector<double> b)
    : a0_(a0), a_(std::move(a)), b_(std::move(b)) {
    const auto n = std::max(a_.size(), b_.size());
    a_.resize(n, 0.0);
    b_.resize(n, 0.0);
}

TrigPolynomial TrigPolynomial::project(const std::function<double(double)>& fn, int degree,
                                       int samples) {
    if (degree < 0) throw DomainError("TrigPolynomial::project: negative degree");
    if (samples <= 0) samples = std::max(64, 8 * (degree + 1));
    if (samples <= 2 * degree) throw DomainError("TrigPolynomial::project: too few samples");
    std::vector<double> values(static_cast<std::size_t>(samples));
    for (int m = 0; m < samples; ++m) values[static_cast<std::size_t>(m)] = fn(kTwoPi * m / samples);

    double a0 = 0.0;
    for (double v : values) a0 += v;
    a0 /= samples;
    std::vector<double> a(static_cast<std::size_t>(degree)), b(static_cast<std::size_t>(degree));
    for (int j = 1; j <= degree; ++j) {
        double sc = 0.0, ss = 0.0;
        for (int m = 0; m < samples; ++m) {
            const double t = kTwoPi * j * m / samples;
            sc += values[static_cast<std::size_t>(m)] * std::cos(t);
            ss += values[static_cast<std::size_t>(m)] * std::sin(t);
        }
        a[static_cast<std::size_t>(j) - 1] = 2.0 * sc / samples;
        b[static_cast<std::size_t>(j) - 1] = 2.0 * ss / samples;
    }
    return TrigPolynomial(a0, std::move(a), std::move(b));
}

double TrigPolynomial::a(int j) const noexcept {
    return (j >= 1 && j <= degree()) ? a_[static_cast<std::size_t>(j) - 1] : 0.0;
}

double TrigPolynomial::b(int j) const noexcept {
    return (j >= 1 && j <= degree()) ? b_[static_cast<std::size_t>(j) - 1] : 0.0;
}

void TrigPolynomial::set(int j, double a, double b) {
    if (j < 1) throw DomainError("TrigPolynomial::set: harmonic index must be >= 1");
    if (j > degree()) {
        a_.resize(static_cast<std::size_t>(j), 0.0);
        b_.resize(static_cast<std::size_t>(j), 0.0);
    }
    a_[static_cast<std::size_t>(j) - 1] = a;
    b_[static_cast<std::size_t>(j) - 1] = b;
}

std::complex<double> TrigPolynomial::mode(int k) const noexcept {
    if (k == 0) return {a0_, 0.0};
    if (k > 0) return {0.5 * a(k), -0.5 * b(k)};
    return {0.5 * a(-k), 0.5 * b(-k)};
}

double TrigPolynomial::operator()(double theta) const noexcept {
    double sum = a0_;
    for (int j = 1; j <= degree(); ++j) {
        sum += a_[static_cast<std::size_t>(j) - 1] * std::cos(j * theta) +
               b_[static_cast<std::size_t>(j) - 1] * std::sin(j * theta);
    }
    return sum;
}

double TrigPolynomial::derivative(double theta) const noexcept {
    double sum = 0.0;
    for (int j = 1; j <= degree(); ++j) {
        sum += j * (b_[static_cast<std::size_t>(j) - 1] * std::cos(j * theta) -
                    a_[static_cast<std::size_t>(j) - 1] * std::sin(j * theta));
    }
    return sum;
}

TrigPolynomial TrigPolynomial::derivative() const {
    TrigPolynomial d(0.0, std::vector<double>(a_.size()), std::vector<double>(b_.size()));
    for (int j = 1; j <= degree(); ++j) d.set(j, j * b(j), -j * a(j));
    return d;
}

TrigPolynomial TrigPolynomial::shifted(double phi) const {
    // cos(j(t - phi)) = cos(jt)cos(j phi) + sin(jt) sin(j phi)
    TrigPolynomial out = TrigPolynomial::constant(a0_);
    for (int j = 1; j <= degree(); ++j) {
        const double c = std::cos(j * phi), s = std::sin(j * phi);
        out.set(j, a(j) * c - b(j) * s, a(j) * s + b(j) * c);
    }
    return out;
}

double TrigPolynomial::coefficient_l1() const noexcept {
    double sum = std::abs(a0_);
    for (std::size_t i = 0; i < a_.size(); ++i) sum += std::abs(a_[i]) + std::abs(b_[i]);
    return sum;
}

double TrigPolynomial::sup_norm(int samples) const {
    double best = 0.0;
    for (int m = 0; m < samples; ++m) best = std::max(best, std::abs((*this)(kTwoPi * m / samples)));
    return best;
}

TrigPolynomial TrigPolynomial::trimmed() const {
    TrigPolynomial out = *this;
    while (!out.a_.empty() && out.a_.back() == 0.0 && out.b_.back() == 0.0) {
        out.a_.pop_back();
        out.b_.pop_back();
    }
    return out;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
    a0_ += other.a0_;
    const int n = std::max(degree(), other.degree());
    a_.resize(static_cast<std::size_t>(n), 0.0);
    b_.resize(static_cast<std::size_t>(n), 0.0);
    for (int j = 1; j <= other.degree(); ++j) {
        a_[static_cast<std::size_t>(j) - 1] += other.a(j);
        b_[static_cast<std::size_t>(j) - 1] += other.b(j);
    }
    return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(double s) {
    a0_ *= s;
    for (auto& v : a_) v *= s;
    for (auto& v : b_) v *= s;
    return *this;
}

std::string TrigPolynomial::to_text() const {
    std::ostringstream out;
    out << std::setprecision(17) << a0_;
    for (int j = 1; j <= degree(); ++j) out << "; " << a(j) << ',' << b(j);
    return out.str();
}

TrigPolynomial TrigPolynomial::from_text(std::string_view text) {
    std::vector<std::string> groups;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(';', start);
        groups.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (groups.empty() || groups.front().empty()) throw ContractError("TrigPolynomial: empty text form");
    TrigPolynomial out = TrigPolynomial::constant(parse_number(groups.front()));
    for (std::size_t j = 1; j < groups.size(); ++j) {
        if (groups[j].empty() && j + 1 == groups.size()) break;  // tolerate a trailing ';'
        const auto comma = groups[j].find(',');
        if (comma == std::string::npos) {
            throw ContractError("TrigPolynomial: harmonic " + std::to_string(j) + " needs 'a,b'");
        }
        out.set(static_cast<int>(j), parse_number(trim(groups[j].substr(0, comma))),
                parse_number(trim(groups[j].substr(comma + 1))));
    }
    return out;
}

nlohmann::json TrigPolynomial::to_json() const {
    return nlohmann::json{{"a0", a0_}, {"a", a_}, {"b", b_}};
}

TrigPolynomial TrigPolynomial::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("a0")) throw ContractError("TrigPolynomial JSON: missing 'a0'");
    std::vector<double> a = j.value("a", std::vector<double>{});
    std::vector<double> b = j.value("b", std::vector<double>{});
    if (a.size() != b.size()) throw ContractError("TrigPolynomial JSON: 'a' and 'b' differ in length");
    return TrigPolynomial(j.at("a0").get<double>(), std::move(a), std::move(b));
}

double max_coefficient_difference(const TrigPolynomial& p, const TrigPolynomial& q) {
    double worst = std::abs(p.a0() - q.a0());
    const int n = std::max(p.degree(), q.degree());
    for (int j = 1; j <= n; ++j) {
        worst = std::max({worst, std::abs(p.a(j) - q.a(j)), std::abs(p.b(j) - q.b(j))});
    }
    return worst;
}

}  // namespace arlab
