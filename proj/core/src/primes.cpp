#include "qgt/primes.hpp"

#include "qgt/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace qgt {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  if (n % 2 == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

std::vector<std::uint64_t> sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

namespace {

// ceil(n^(a/b)) for a, b > 0.
std::uint64_t ceil_power(std::uint64_t n, const Rational& g) {
  const auto a = static_cast<unsigned>(numerator(g));
  const auto b = static_cast<unsigned>(denominator(g));
  const BigInt target = ipow(BigInt(n), a);
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), to_double(g)));
  if (r > 0) --r;
  while (ipow(BigInt(r), b) < target) ++r;
  while (r > 0 && ipow(BigInt(r - 1), b) >= target) --r;
  return r;
}

std::uint64_t estimate_nth_prime(std::size_t n) {
  const double x = std::max<double>(static_cast<double>(n), 6.0);
  return static_cast<std::uint64_t>(x * (std::log(x) + std::log(std::log(x))) + 10);
}

// Primes above `floor` with pred(p), the first n of them.
template <class Pred>
std::vector<std::uint64_t> sieve_members(std::uint64_t floor, std::size_t n, std::size_t density, Pred pred) {
  std::vector<std::uint64_t> out;
  if (n == 0) return out;
  std::uint64_t limit = floor + estimate_nth_prime(n * density) + 100;
  for (;;) {
    out.clear();
    for (std::uint64_t p : sieve(limit)) {
      if (p > floor && pred(p)) {
        out.push_back(p);
        if (out.size() == n) return out;
      }
    }
    limit *= 2;
  }
}

struct Pair {
  std::uint64_t p;
  std::uint64_t q;
};

// Pairs with p <= bound, in increasing order of p.
std::vector<Pair> make_pairs(const Rational& lambda, std::uint64_t start, std::uint64_t bound) {
  std::vector<Pair> out;
  std::uint64_t last_q = 0;
  std::uint64_t p = next_prime(start);
  while (p <= bound) {
    if (p % 4 == 1) {
      std::uint64_t threshold;
      if (lambda == 0) {
        threshold = ceil_power(p, Rational(17, 12));
      } else {
        const Rational t = Rational(p) / lambda;
        threshold = static_cast<std::uint64_t>((numerator(t) + denominator(t) - 1) / denominator(t));
      }
      std::uint64_t q = next_prime(std::max(threshold, last_q + 1));
      while (q % 4 != 3) q = next_prime(q + 1);
      out.push_back({p, q});
      last_q = q;
    }
    p = next_prime(p + 1);
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s) {
  const Rational q = parse_rational(s);
  if (denominator(q) != 1 || q < 0) throw ParseError("expected a nonnegative integer, got '" + std::string(s) + "'");
  return static_cast<std::uint64_t>(numerator(q));
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_args(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      std::string t = trim(s.substr(start, i - start));
      if (!t.empty()) out.push_back(t);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

PrimeSubset PrimeSubset::explicit_only(std::vector<std::uint64_t> primes) {
  PrimeSubset s;
  return s.with_explicit(std::move(primes));
}

PrimeSubset PrimeSubset::all_primes() {
  PrimeSubset s;
  s.tail_ = TailFamily::AllPrimes;
  return s;
}

PrimeSubset PrimeSubset::arith_prog(std::uint64_t a, std::uint64_t m) {
  if (m == 0) throw PreconditionViolation("arith_prog modulus must be positive");
  PrimeSubset s;
  s.tail_ = TailFamily::ArithProg;
  s.a_ = a % m;
  s.m_ = m;
  return s;
}

PrimeSubset PrimeSubset::growth(const Rational& exponent) {
  if (exponent <= 0) throw PreconditionViolation("growth exponent must be positive");
  PrimeSubset s;
  s.tail_ = TailFamily::Growth;
  s.growth_ = exponent;
  return s;
}

PrimeSubset PrimeSubset::paired(const Rational& lambda, std::uint64_t p_min) {
  if (lambda < 0 || lambda > 1) throw PreconditionViolation("pairing ratio must lie in [0, 1]");
  PrimeSubset s;
  s.tail_ = TailFamily::Paired;
  s.lambda_ = lambda;
  s.p_min_ = std::max<std::uint64_t>(p_min, 2);
  return s;
}

PrimeSubset PrimeSubset::with_explicit(std::vector<std::uint64_t> primes) const {
  for (std::uint64_t p : primes) {
    if (!is_prime(p)) throw PreconditionViolation(std::to_string(p) + " is not prime");
  }
  PrimeSubset s = *this;
  s.explicit_.insert(s.explicit_.end(), primes.begin(), primes.end());
  std::sort(s.explicit_.begin(), s.explicit_.end());
  s.explicit_.erase(std::unique(s.explicit_.begin(), s.explicit_.end()), s.explicit_.end());
  return s;
}

PrimeSubset PrimeSubset::parse(std::string_view text) {
  PrimeSubset out;
  std::vector<std::uint64_t> explicit_primes;
  bool have_tail = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i != text.size() && text[i] != '+') continue;
    const std::string term = trim(text.substr(start, i - start));
    start = i + 1;
    const std::size_t open = term.find('(');
    const std::string name = trim(term.substr(0, open));
    std::vector<std::string> args;
    if (open != std::string::npos) {
      if (term.back() != ')') throw ParseError("subset term '" + term + "' lacks ')'");
      args = split_args(std::string_view(term).substr(open + 1, term.size() - open - 2));
    }
    auto set_tail = [&](const PrimeSubset& s) {
      if (have_tail) throw ParseError("subset '" + std::string(text) + "' has two tail families");
      have_tail = true;
      out = s;
    };
    auto need = [&](std::size_t k) {
      if (args.size() != k) throw ParseError("'" + name + "' takes " + std::to_string(k) + " argument(s)");
    };
    if (name == "explicit") {
      for (const auto& a : args) explicit_primes.push_back(parse_u64(a));
    } else if (name == "none") {
      need(0);
    } else if (name == "all_primes") {
      need(0);
      set_tail(all_primes());
    } else if (name == "arith_prog") {
      need(2);
      set_tail(arith_prog(parse_u64(args[0]), parse_u64(args[1])));
    } else if (name == "growth") {
      need(1);
      set_tail(growth(parse_rational(args[0])));
    } else if (name == "paired") {
      if (args.empty() || args.size() > 2) throw ParseError("'paired' takes 1 or 2 arguments");
      set_tail(paired(parse_rational(args[0]), args.size() == 2 ? parse_u64(args[1]) : 2));
    } else {
      throw ParseError("unknown subset family '" + name + "'");
    }
  }
  return out.with_explicit(explicit_primes);
}

std::string PrimeSubset::tail_str() const {
  switch (tail_) {
    case TailFamily::None: return "none";
    case TailFamily::AllPrimes: return "all_primes";
    case TailFamily::ArithProg: return "arith_prog(" + std::to_string(a_) + "," + std::to_string(m_) + ")";
    case TailFamily::Growth: return "growth(" + to_string(growth_) + ")";
    case TailFamily::Paired: return "paired(" + to_string(lambda_) + "," + std::to_string(p_min_) + ")";
  }
  return "none";
}

std::string PrimeSubset::str() const {
  std::string out;
  if (!explicit_.empty()) {
    out = "explicit(";
    for (std::size_t i = 0; i < explicit_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(explicit_[i]);
    }
    out += ")";
  }
  if (tail_ == TailFamily::None) return out.empty() ? "explicit()" : out;
  return out.empty() ? tail_str() : out + "+" + tail_str();
}

std::vector<std::uint64_t> PrimeSubset::first(std::size_t n) const {
  std::vector<std::uint64_t> out(explicit_.begin(), explicit_.begin() + std::min(n, explicit_.size()));
  if (out.size() == n) return out;
  const std::size_t need = n - out.size();
  const std::uint64_t floor = tail_floor();
  std::vector<std::uint64_t> tail;
  switch (tail_) {
    case TailFamily::None: break;
    case TailFamily::AllPrimes:
      tail = sieve_members(floor, need, 1, [](std::uint64_t) { return true; });
      break;
    case TailFamily::ArithProg: {
      if (std::gcd(a_, m_) != 1) {
        // At most one prime lies in a non-coprime class.
        if (is_prime(a_) && a_ > floor) tail.push_back(a_);
        if (m_ == 1) tail = sieve_members(floor, need, 1, [](std::uint64_t) { return true; });
        break;
      }
      const std::uint64_t a = a_;
      const std::uint64_t m = m_;
      tail = sieve_members(floor, need, static_cast<std::size_t>(m), [a, m](std::uint64_t p) { return p % m == a; });
      break;
    }
    case TailFamily::Growth: {
      std::uint64_t last = floor;
      for (std::uint64_t k = 1; tail.size() < need; ++k) {
        const std::uint64_t q = next_prime(ceil_power(k, growth_));
        if (q > last) {
          tail.push_back(q);
          last = q;
        }
      }
      break;
    }
    case TailFamily::Paired: {
      const std::uint64_t start = std::max(p_min_, floor + 1);
      for (std::uint64_t bound = start + 64 * need + 64;; bound *= 2) {
        std::vector<std::uint64_t> members;
        for (const Pair& pr : make_pairs(lambda_, start, bound)) {
          members.push_back(pr.p);
          if (pr.q <= bound) members.push_back(pr.q);
        }
        std::sort(members.begin(), members.end());
        if (members.size() >= need) {
          tail.assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(need));
          break;
        }
      }
      break;
    }
  }
  out.insert(out.end(), tail.begin(), tail.end());
  if (out.size() > n) out.resize(n);
  return out;
}

std::vector<std::vector<std::uint64_t>> PrimeSubset::blocks(std::size_t count) const {
  std::vector<std::vector<std::uint64_t>> out;
  if (tail_ != TailFamily::Paired) {
    const auto members = first(2 * count);
    for (std::size_t i = 0; i + 1 < members.size() && out.size() < count; i += 2) {
      out.push_back({members[i], members[i + 1]});
    }
    return out;
  }
  for (std::size_t i = 0; i + 1 < explicit_.size() && out.size() < count; i += 2) {
    out.push_back({explicit_[i], explicit_[i + 1]});
  }
  const std::uint64_t start = std::max(p_min_, tail_floor() + 1);
  for (std::uint64_t bound = start + 64 * count + 64; out.size() < count; bound *= 2) {
    const auto pairs = make_pairs(lambda_, start, bound);
    if (pairs.size() + out.size() < count) continue;
    for (const Pair& pr : pairs) {
      if (out.size() == count) break;
      out.push_back({pr.p, pr.q});
    }
  }
  return out;
}

}  // namespace qgt
