#include "ccn/poly_field.hpp"

#include "ccn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace ccn {
namespace {

// d^k/dy^k y^p evaluated at y.
double power_derivative(double y, int p, int k) {
  if (k > p) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= p - i;
  return c * std::pow(y, p - k);
}

class FieldParser {
 public:
  explicit FieldParser(std::string_view text) : text_(text) {}

  PolyField parse() {
    PolyField out;
    bool have_f = false;
    std::vector<std::pair<int, std::string>> lines;
    {
      std::size_t start = 0;
      int no = 0;
      while (start <= text_.size()) {
        const std::size_t end = text_.find('\n', start);
        std::string line(text_.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        lines.emplace_back(no, line);
        if (end == std::string_view::npos) break;
        start = end + 1;
      }
    }
    // Expression pieces with their origin so errors point at the right place.
    for (const auto& [no, raw] : lines) {
      const auto first = raw.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      const std::string_view body = std::string_view(raw).substr(first);
      if (body.rfind("degree", 0) == 0 && !have_f) {
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError(no, static_cast<int>(first) + 1, "expected `degree = <D>`");
        std::string val(body.substr(eq + 1));
        val.erase(0, val.find_first_not_of(" \t"));
        val.erase(val.find_last_not_of(" \t") + 1);
        int d = 0;
        const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), d);
        if (ec != std::errc() || ptr != val.data() + val.size() || d < 1)
          throw ParseError(no, static_cast<int>(first + eq) + 2, "degree must be a positive integer");
        out.degree_cap = d;
        continue;
      }
      if (body.front() == 'f') {
        if (have_f) throw ParseError(no, static_cast<int>(first) + 1, "second definition of f");
        std::size_t i = 1;
        while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
        if (i >= body.size() || body[i] != '=') throw ParseError(no, static_cast<int>(first + i) + 1, "expected `f =`");
        have_f = true;
        pieces_.push_back({no, static_cast<int>(first + i) + 2, std::string(body.substr(i + 1))});
        continue;
      }
      if (have_f && (body.front() == '+' || body.front() == '-')) {
        pieces_.push_back({no, static_cast<int>(first) + 1, std::string(body)});
        continue;
      }
      throw ParseError(no, static_cast<int>(first) + 1, "expected `f = ...`, `degree = ...` or a continuation line starting with + or -");
    }
    if (!have_f) throw ParseError(std::max(1, static_cast<int>(lines.size())), 1, "missing `f = ...`");

    std::map<std::pair<std::vector<int>, int>, double> merged;
    std::vector<std::pair<std::vector<int>, int>> order;
    piece_ = 0;
    pos_ = 0;
    bool first_term = true;
    for (;;) {
      skip_ws();
      if (at_end()) break;
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        advance();
      } else if (!first_term) {
        fail("expected + or - between terms");
      }
      first_term = false;
      Raw term = parse_term();
      term.coeff *= sign;
      const auto key = std::make_pair(term.y_exp, term.l_exp);
      if (!merged.count(key)) order.push_back(key);
      merged[key] += term.coeff;
      max_var_ = std::max(max_var_, term.max_var);
    }
    if (order.empty()) fail("f has no terms");

    out.n_inputs = max_var_;
    for (const auto& key : order) {
      Monomial m;
      m.coeff = merged[key];
      m.y_exp = key.first;
      m.y_exp.resize(static_cast<std::size_t>(out.n_inputs), 0);
      m.l_exp = key.second;
      if (m.coeff != 0.0) out.terms.push_back(std::move(m));
    }
    return out;
  }

 private:
  struct Piece {
    int line;
    int col;
    std::string text;
  };
  struct Raw {
    double coeff = 1.0;
    std::vector<int> y_exp;
    int l_exp = 0;
    int max_var = 0;
  };

  bool at_end() const { return piece_ >= pieces_.size(); }
  char peek() const { return pieces_[piece_].text[pos_]; }
  void advance() {
    ++pos_;
    normalize();
  }
  void normalize() {
    while (piece_ < pieces_.size() && pos_ >= pieces_[piece_].text.size()) {
      ++piece_;
      pos_ = 0;
    }
  }
  void skip_ws() {
    normalize();
    while (!at_end() && (peek() == ' ' || peek() == '\t')) advance();
  }
  [[noreturn]] void fail(const std::string& what) const {
    if (at_end()) {
      const auto& last = pieces_.back();
      throw ParseError(last.line, last.col + static_cast<int>(last.text.size()), what);
    }
    throw ParseError(pieces_[piece_].line, pieces_[piece_].col + static_cast<int>(pos_), what);
  }

  int parse_int() {
    skip_ws();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    int v = 0;
    while (!at_end() && pos_ < pieces_[piece_].text.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1000000) fail("integer too large");
      const auto p = piece_;
      ++pos_;
      if (pos_ >= pieces_[p].text.size()) {
        normalize();
        break;
      }
    }
    return v;
  }

  int parse_exponent() {
    skip_ws();
    if (!at_end() && peek() == '^') {
      advance();
      const int e = parse_int();
      if (e < 1) fail("exponent must be at least 1");
      return e;
    }
    return 1;
  }

  Raw parse_term() {
    Raw t;
    bool any = false;
    for (;;) {
      skip_ws();
      if (at_end()) fail("expected a factor");
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const std::string& s = pieces_[piece_].text;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data() + pos_, s.data() + s.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos_ = static_cast<std::size_t>(ptr - s.data());
        normalize();
        t.coeff *= v;
      } else if (c == 'y') {
        advance();
        const int var = parse_int();
        if (var < 1) fail("variables are numbered from y1");
        const int e = parse_exponent();
        if (static_cast<int>(t.y_exp.size()) < var) t.y_exp.resize(static_cast<std::size_t>(var), 0);
        t.y_exp[static_cast<std::size_t>(var - 1)] += e;
        t.max_var = std::max(t.max_var, var);
      } else if (c == 'L') {
        advance();
        t.l_exp += parse_exponent();
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      any = true;
      skip_ws();
      if (at_end() || peek() != '*') break;
      advance();
    }
    if (!any) fail("empty term");
    // canonical key: trailing zero exponents trimmed
    while (!t.y_exp.empty() && t.y_exp.back() == 0) t.y_exp.pop_back();
    return t;
  }

  std::string_view text_;
  std::vector<Piece> pieces_;
  std::size_t piece_ = 0;
  std::size_t pos_ = 0;
  int max_var_ = 0;
};

}  // namespace

int Monomial::y_degree() const {
  int d = 0;
  for (int e : y_exp) d += e;
  return d;
}

double PolyField::value(const double* y, double lambda, int dy1, int dy2, int dl) const {
  double total = 0.0;
  for (const auto& m : terms) {
    std::vector<int> k(static_cast<std::size_t>(n_inputs), 0);
    if (dy1 >= 0) ++k[static_cast<std::size_t>(dy1)];
    if (dy2 >= 0) ++k[static_cast<std::size_t>(dy2)];
    double v = m.coeff * power_derivative(lambda, m.l_exp, dl);
    for (int i = 0; i < n_inputs && v != 0.0; ++i) {
      const int p = m.y_exp[static_cast<std::size_t>(i)];
      const int d = k[static_cast<std::size_t>(i)];
      if (p == 0 && d == 0) continue;
      v *= power_derivative(y[i], p, d);
    }
    total += v;
  }
  return total;
}

PolyField parse_field(std::string_view text) { return FieldParser(text).parse(); }

std::string serialize_field(const PolyField& f) {
  // Shortest representation that parses back to the same double.
  auto number = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  std::ostringstream os;
  if (f.degree_cap > 0) os << "degree = " << f.degree_cap << "\n";
  os << "f =";
  bool first = true;
  for (const auto& m : f.terms) {
    os << (first ? " " : "\n  ") << (m.coeff < 0 ? "- " : (first ? "" : "+ ")) << number(std::abs(m.coeff));
    for (int i = 0; i < f.n_inputs; ++i) {
      const int p = m.y_exp[static_cast<std::size_t>(i)];
      if (p == 0) continue;
      os << " * y" << i + 1;
      if (p > 1) os << "^" << p;
    }
    if (m.l_exp > 0) os << " * L" << (m.l_exp > 1 ? "^" + std::to_string(m.l_exp) : "");
    first = false;
  }
  os << "\n";
  return os.str();
}

NetworkField::NetworkField(Network net, PolyField f) : net_(std::move(net)), f_(std::move(f)) {
  if (f_.n_inputs > net_.n_arrows())
    throw ModelError("field uses y" + std::to_string(f_.n_inputs) + " but the network has " +
                     std::to_string(net_.n_arrows()) + " arrows");
  f_.n_inputs = net_.n_arrows();
  for (auto& m : f_.terms) {
    m.y_exp.resize(static_cast<std::size_t>(f_.n_inputs), 0);
    if (m.y_degree() == 0) throw ModelError("term without y factor: F(0, L) = 0 requires every term to contain a state variable");
    if (f_.degree_cap > 0 && m.degree() > f_.degree_cap)
      throw ModelError("term of degree " + std::to_string(m.degree()) + " exceeds the cap " + std::to_string(f_.degree_cap));
  }
}

void NetworkField::gather(const Vec& x, int cell, std::vector<double>& y) const {
  y.resize(static_cast<std::size_t>(f_.n_inputs));
  for (int k = 0; k < f_.n_inputs; ++k) y[static_cast<std::size_t>(k)] = x(net_.arrows()[static_cast<std::size_t>(k)].map(cell));
}

Vec NetworkField::eval(const Vec& x, double lambda) const {
  Vec out(dim());
  std::vector<double> y;
  for (int i = 0; i < dim(); ++i) {
    gather(x, i, y);
    out(i) = f_.value(y.data(), lambda);
  }
  return out;
}

Mat NetworkField::jacobian(const Vec& x, double lambda) const {
  Mat j = Mat::Zero(dim(), dim());
  std::vector<double> y;
  for (int i = 0; i < dim(); ++i) {
    gather(x, i, y);
    for (int k = 0; k < f_.n_inputs; ++k) j(i, net_.arrows()[static_cast<std::size_t>(k)].map(i)) += f_.value(y.data(), lambda, k);
  }
  return j;
}

Mat NetworkField::jacobian_lambda(const Vec& x, double lambda) const {
  Mat j = Mat::Zero(dim(), dim());
  std::vector<double> y;
  for (int i = 0; i < dim(); ++i) {
    gather(x, i, y);
    for (int k = 0; k < f_.n_inputs; ++k)
      j(i, net_.arrows()[static_cast<std::size_t>(k)].map(i)) += f_.value(y.data(), lambda, k, -1, 1);
  }
  return j;
}

Vec NetworkField::second_derivative(const Vec& x, double lambda, const Vec& u, const Vec& w) const {
  Vec out = Vec::Zero(dim());
  std::vector<double> y;
  for (int i = 0; i < dim(); ++i) {
    gather(x, i, y);
    for (int k = 0; k < f_.n_inputs; ++k)
      for (int l = 0; l < f_.n_inputs; ++l) {
        const double uk = u(net_.arrows()[static_cast<std::size_t>(k)].map(i));
        const double wl = w(net_.arrows()[static_cast<std::size_t>(l)].map(i));
        if (uk == 0.0 || wl == 0.0) continue;
        out(i) += f_.value(y.data(), lambda, k, l) * uk * wl;
      }
  }
  return out;
}

double NetworkField::equivariance_residual(const std::vector<Mat>& generators, Rng& rng, int samples) const {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(dim());
    for (int i = 0; i < dim(); ++i) x(i) = rng.gaussian();
    const double lambda = rng.gaussian();
    const Vec fx = eval(x, lambda);
    for (const auto& a : generators) {
      const Vec lhs = eval(a * x, lambda);
      const Vec rhs = a * fx;
      const double scale = std::max({1.0, lhs.norm(), rhs.norm()});
      worst = std::max(worst, (lhs - rhs).norm() / scale);
    }
  }
  return worst;
}

}  // namespace ccn
