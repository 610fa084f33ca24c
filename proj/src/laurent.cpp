#include "symrank/laurent.hpp"

#include <stdexcept>
#include <vector>

#include "symrank/errors.hpp"

namespace symrank {

namespace {

void accumulate(LaurentPolynomial::TermMap& terms, LaurentPolynomial::Exponent exp,
                const mpz_class& value) {
  if (value == 0) {
    return;
  }
  auto [it, inserted] = terms.try_emplace(exp, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) {
      terms.erase(it);
    }
  }
}

// Dense coefficient vector, index = exponent - shift.
std::vector<mpz_class> to_dense(const LaurentPolynomial::TermMap& terms,
                                 LaurentPolynomial::Exponent shift) {
  std::vector<mpz_class> dense(static_cast<std::size_t>(terms.rbegin()->first - shift + 1));
  for (const auto& [e, c] : terms) {
    dense[static_cast<std::size_t>(e - shift)] = c;
  }
  return dense;
}

std::string monomial_text(LaurentPolynomial::Exponent e, bool latex) {
  if (e == 0) {
    return "";
  }
  std::string base = latex ? "\\mathbb{L}" : "L";
  if (e == 1) {
    return base;
  }
  return latex ? base + "^{" + std::to_string(e) + "}" : base + "^" + std::to_string(e);
}

std::string render(const LaurentPolynomial::TermMap& terms, bool latex) {
  if (terms.empty()) {
    return "0";
  }
  std::string out;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [e, c] = *it;
    mpz_class magnitude = abs(c);
    if (first) {
      if (c < 0) {
        out += "-";
      }
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;

    std::string mono = monomial_text(e, latex);
    if (mono.empty()) {
      out += magnitude.get_str();
    } else if (magnitude == 1) {
      out += mono;
    } else {
      out += magnitude.get_str() + (latex ? " " : "*") + mono;
    }
  }
  return out;
}

} // namespace

LaurentPolynomial LaurentPolynomial::monomial(const Coefficient& coeff, Exponent exp) {
  TermMap terms;
  if (coeff != 0) {
    terms.emplace(exp, coeff);
  }
  return LaurentPolynomial(std::move(terms));
}

LaurentPolynomial LaurentPolynomial::from_terms(TermMap terms) {
  std::erase_if(terms, [](const auto& kv) { return kv.second == 0; });
  return LaurentPolynomial(std::move(terms));
}

LaurentPolynomial::Coefficient LaurentPolynomial::coefficient(Exponent exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? Coefficient(0) : it->second;
}

std::optional<std::pair<LaurentPolynomial::Exponent, LaurentPolynomial::Exponent>>
LaurentPolynomial::degree_range() const {
  if (terms_.empty()) {
    return std::nullopt;
  }
  return std::make_pair(terms_.begin()->first, terms_.rbegin()->first);
}

bool LaurentPolynomial::has_negative_exponents() const {
  return !terms_.empty() && terms_.begin()->first < 0;
}

LaurentPolynomial LaurentPolynomial::operator-() const {
  TermMap negated = terms_;
  for (auto& [e, c] : negated) {
    c = -c;
  }
  return LaurentPolynomial(std::move(negated));
}

LaurentPolynomial operator+(const LaurentPolynomial& p, const LaurentPolynomial& q) {
  LaurentPolynomial::TermMap sum = p.terms_;
  for (const auto& [e, c] : q.terms_) {
    accumulate(sum, e, c);
  }
  return LaurentPolynomial(std::move(sum));
}

LaurentPolynomial operator-(const LaurentPolynomial& p, const LaurentPolynomial& q) {
  return p + (-q);
}

LaurentPolynomial operator*(const LaurentPolynomial& p, const LaurentPolynomial& q) {
  LaurentPolynomial::TermMap product;
  for (const auto& [ep, cp] : p.terms_) {
    for (const auto& [eq, cq] : q.terms_) {
      accumulate(product, ep + eq, cp * cq);
    }
  }
  return LaurentPolynomial(std::move(product));
}

LaurentPolynomial LaurentPolynomial::pow(unsigned exp) const {
  LaurentPolynomial result = one();
  LaurentPolynomial base = *this;
  while (exp != 0) {
    if (exp & 1U) {
      result = result * base;
    }
    exp >>= 1U;
    if (exp != 0) {
      base = base * base;
    }
  }
  return result;
}

mpq_class LaurentPolynomial::eval(const mpz_class& x) const {
  if (x == 0) {
    if (has_negative_exponents()) {
      throw ZeroBase();
    }
    return mpq_class(coefficient(0));
  }
  mpq_class total = 0;
  for (const auto& [e, c] : terms_) {
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    mpq_class term = e < 0 ? mpq_class(c, power) : mpq_class(c * power);
    term.canonicalize();
    total += term;
  }
  return total;
}

mpz_class LaurentPolynomial::eval_integer(const mpz_class& x) const {
  mpq_class value = eval(x);
  if (value.get_den() != 1) {
    throw NonintegralQuotient("evaluation of " + to_string() + " at " + x.get_str() +
                              " is not an integer");
  }
  return value.get_num();
}

std::string LaurentPolynomial::to_string() const { return render(terms_, false); }

std::string LaurentPolynomial::to_latex() const { return render(terms_, true); }

nlohmann::json LaurentPolynomial::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [e, c] : terms_) {
    j[std::to_string(e)] = c.get_str();
  }
  return j;
}

LaurentPolynomial LaurentPolynomial::from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw InvalidArgument("polynomial JSON must be an object");
  }
  TermMap terms;
  for (const auto& [key, value] : j.items()) {
    try {
      std::size_t used = 0;
      const Exponent e = std::stoll(key, &used);
      if (used != key.size() || !value.is_string()) {
        throw std::invalid_argument(key);
      }
      accumulate(terms, e, mpz_class(value.get<std::string>()));
    } catch (const std::exception&) {
      throw InvalidArgument("malformed polynomial term '" + key + "'");
    }
  }
  return LaurentPolynomial(std::move(terms));
}

LaurentPolynomial add(const LaurentPolynomial& p, const LaurentPolynomial& q) { return p + q; }

LaurentPolynomial mul(const LaurentPolynomial& p, const LaurentPolynomial& q) { return p * q; }

LaurentPolynomial div_exact(const LaurentPolynomial& p, const LaurentPolynomial& q) {
  if (q.is_zero()) {
    throw DivisionByZero();
  }
  if (p.is_zero()) {
    return p;
  }
  // Strip the lowest powers of L so both operands become ordinary
  // polynomials with nonzero constant term, then long-divide from the top.
  const auto p_low = p.terms().begin()->first;
  const auto q_low = q.terms().begin()->first;
  std::vector<mpz_class> rem = to_dense(p.terms(), p_low);
  const std::vector<mpz_class> divisor = to_dense(q.terms(), q_low);

  auto fail = [&] {
    throw NonzeroRemainder("(" + q.to_string() + ") does not divide (" + p.to_string() + ")");
  };
  if (rem.size() < divisor.size()) {
    fail();
  }

  const std::size_t dq = divisor.size() - 1;
  const mpz_class& lead = divisor.back();
  LaurentPolynomial::TermMap quotient;
  for (std::size_t top = rem.size() - 1; top + 1 > dq; --top) {
    if (rem[top] == 0) {
      if (top == dq) {
        break;
      }
      continue;
    }
    if (!mpz_divisible_p(rem[top].get_mpz_t(), lead.get_mpz_t())) {
      fail();
    }
    mpz_class factor;
    mpz_divexact(factor.get_mpz_t(), rem[top].get_mpz_t(), lead.get_mpz_t());
    const std::size_t shift = top - dq;
    for (std::size_t i = 0; i <= dq; ++i) {
      rem[shift + i] -= factor * divisor[i];
    }
    quotient.emplace(static_cast<LaurentPolynomial::Exponent>(shift) + p_low - q_low, factor);
    if (top == dq) {
      break;
    }
  }
  for (const auto& c : rem) {
    if (c != 0) {
      fail();
    }
  }
  return LaurentPolynomial::from_terms(std::move(quotient));
}

} // namespace symrank
