#include "qgt/eigenlist.hpp"

#include "qgt/errors.hpp"
#include "qgt/primes.hpp"

#include <algorithm>
#include <sstream>

namespace qgt {

namespace {

bool definitely_greater(const Real& a, const Real& b) { return a.compare(b) == std::partial_ordering::greater; }

// Sorts by decreasing value and merges entries whose values agree.
void merge_sorted(std::vector<Eigenvalue>& v) {
  std::sort(v.begin(), v.end(), [](const Eigenvalue& a, const Eigenvalue& b) { return a.value.mid() > b.value.mid(); });
  std::vector<Eigenvalue> out;
  for (auto& e : v) {
    if (e.multiplicity == 0) continue;
    if (!out.empty() && out.back().value.same_as(e.value)) {
      out.back().multiplicity += e.multiplicity;
    } else {
      out.push_back(std::move(e));
    }
  }
  v = std::move(out);
}

// Rewrites the sequences {s r^n} so that every seed is <= bound, moving the
// leading terms into the head. Requires bound <= every seed.
void roll_to(std::vector<Eigenvalue>& head, std::vector<Eigenvalue>& seeds, const Real& r, const Real& bound) {
  for (auto& s : seeds) {
    while (definitely_greater(s.value, bound)) {
      head.push_back(s);
      s.value = s.value * r;
    }
  }
}

const Real& min_seed(const std::vector<Eigenvalue>& seeds) {
  const Eigenvalue* best = &seeds.front();
  for (const auto& s : seeds) {
    if (s.value.mid() < best->value.mid()) best = &s;
  }
  return best->value;
}

Real sum(const std::vector<Eigenvalue>& v) {
  Real total = 0;
  for (const auto& e : v) total += e.value * Real(Rational(e.multiplicity));
  return total;
}

}  // namespace

EigenvalueList::EigenvalueList(std::vector<Eigenvalue> head, std::optional<GeometricTail> tail, Real residual)
    : head_(std::move(head)), tail_(std::move(tail)), residual_(std::move(residual)) {
  canonicalize();
}

void EigenvalueList::canonicalize() {
  if (residual_.compare(Real(0)) == std::partial_ordering::less) {
    throw PreconditionViolation("negative residual mass " + residual_.str());
  }
  auto check_positive = [](const std::vector<Eigenvalue>& v) {
    for (const auto& e : v) {
      if (e.multiplicity > 0 && !definitely_greater(e.value, Real(0))) {
        throw PreconditionViolation("eigenvalues must be positive, got " + e.value.str());
      }
    }
  };
  check_positive(head_);
  if (tail_) {
    check_positive(tail_->seeds);
    std::erase_if(tail_->seeds, [](const Eigenvalue& e) { return e.multiplicity == 0; });
    if (tail_->seeds.empty()) tail_.reset();
  }
  if (!tail_) {
    merge_sorted(head_);
    if (head_.empty() && residual_.same_as(Real(0))) throw PreconditionViolation("empty eigenvalue list");
    return;
  }
  const Real r = tail_->ratio;
  if (!definitely_greater(r, Real(0)) || !definitely_greater(Real(1), r)) {
    throw PreconditionViolation("tail ratio must lie in (0, 1), got " + r.str());
  }
  auto& seeds = tail_->seeds;
  roll_to(head_, seeds, r, Real(min_seed(seeds)));
  merge_sorted(seeds);
  merge_sorted(head_);
  // Every head value must exceed the largest seed.
  while (!head_.empty() && !definitely_greater(head_.back().value, seeds.front().value)) {
    Eigenvalue first = seeds.front();
    seeds.erase(seeds.begin());
    head_.push_back(first);
    first.value = first.value * r;
    seeds.push_back(first);
    merge_sorted(head_);
  }
  // Start the tail as early as the head allows.
  while (!head_.empty()) {
    const Eigenvalue& last = seeds.back();
    const Real previous = last.value / r;
    if (!head_.back().value.same_as(previous) || head_.back().multiplicity != last.multiplicity) break;
    Eigenvalue moved = head_.back();
    head_.pop_back();
    seeds.pop_back();
    seeds.insert(seeds.begin(), moved);
  }
}

EigenvalueList EigenvalueList::uniform(std::uint64_t k) {
  if (k == 0) throw PreconditionViolation("uniform list needs k >= 1");
  return EigenvalueList({{Real(Rational(1, k)), k}});
}

EigenvalueList EigenvalueList::powers(const Rational& lambda) {
  if (lambda <= 0 || lambda > 1) throw PreconditionViolation("powers list needs 0 < lambda <= 1");
  const Rational top = 1 / (1 + lambda);
  return EigenvalueList({{Real(top), 1}, {Real(lambda * top), 1}});
}

EigenvalueList EigenvalueList::boca(std::uint64_t p, const Rational& beta) {
  if (beta <= 0 || beta > 1) throw PreconditionViolation("Boca list needs 0 < beta <= 1");
  if (!is_prime(p)) throw PreconditionViolation(std::to_string(p) + " is not prime");
  const Real r = Real::prime_power(p, -beta);
  return EigenvalueList({}, GeometricTail{r, {{Real(1) - r, 1}}});
}

EigenvalueList EigenvalueList::units_corner(std::uint64_t p) { return boca(p, 1); }

EigenvalueList EigenvalueList::dual_corner(std::uint64_t p) {
  if (!is_prime(p)) throw PreconditionViolation(std::to_string(p) + " is not prime");
  const Rational top(1, p - 1);
  std::vector<Eigenvalue> head;
  if (p > 2) head.push_back({Real(top), p - 2});
  return EigenvalueList(head, GeometricTail{Real(Rational(1, p)), {{Real(top / p), p - 1}}});
}

EigenvalueList EigenvalueList::selfdual_corner(std::uint64_t p) {
  if (!is_prime(p)) throw PreconditionViolation(std::to_string(p) + " is not prime");
  return EigenvalueList({}, GeometricTail{Real(Rational(1, p)), {{Real(Rational(1, p)), p - 1}}});
}

bool EigenvalueList::is_exact() const {
  auto exact = [](const std::vector<Eigenvalue>& v) {
    return std::all_of(v.begin(), v.end(), [](const Eigenvalue& e) { return e.value.is_exact(); });
  };
  return exact(head_) && residual_.is_exact() && (!tail_ || (tail_->ratio.is_exact() && exact(tail_->seeds)));
}

bool EigenvalueList::is_truncated() const { return !residual_.same_as(Real(0)) || !residual_.is_exact(); }

Real EigenvalueList::mass() const {
  Real total = sum(head_) + residual_;
  if (tail_) total += sum(tail_->seeds) / (Real(1) - tail_->ratio);
  return total;
}

bool EigenvalueList::mass_is_one() const {
  const Real m = mass();
  return m.is_exact() ? m.exact() == 1 : m.contains(1);
}

const Eigenvalue& EigenvalueList::top() const {
  if (!head_.empty()) return head_.front();
  if (tail_) return tail_->seeds.front();
  throw PreconditionViolation("list has no entries");
}

std::vector<Eigenvalue> EigenvalueList::levels(std::size_t n) const {
  std::vector<Eigenvalue> out(head_.begin(), head_.begin() + static_cast<std::ptrdiff_t>(std::min(n, head_.size())));
  if (!tail_) return out;
  std::vector<Eigenvalue> round = tail_->seeds;
  while (out.size() < n) {
    for (auto& s : round) {
      if (out.size() == n) break;
      out.push_back(s);
      s.value = s.value * tail_->ratio;
    }
  }
  return out;
}

std::optional<std::size_t> EigenvalueList::level_count() const {
  if (tail_) return std::nullopt;
  return head_.size();
}

Real EigenvalueList::mass_of_top_levels(std::size_t m) const { return sum(levels(m)); }

EigenvalueList EigenvalueList::top_levels(std::size_t m) const {
  if (m == 0) throw PreconditionViolation("must keep at least one level");
  if (!tail_ && m >= head_.size() && !is_truncated()) return *this;
  std::vector<Eigenvalue> kept = levels(m);
  const Real kept_mass = sum(kept);
  for (auto& e : kept) e.value = e.value / kept_mass;
  return EigenvalueList(std::move(kept));
}

std::string EigenvalueList::str(std::size_t max_levels) const {
  std::ostringstream os;
  const auto shown = levels(max_levels);
  for (std::size_t i = 0; i < shown.size(); ++i) {
    if (i) os << ", ";
    os << shown[i].value.str() << " x" << shown[i].multiplicity;
  }
  if (tail_) {
    os << ", ... (ratio " << tail_->ratio.str() << ")";
  } else if (head_.size() > shown.size()) {
    os << ", ...";
  }
  if (is_truncated()) os << " [residual " << residual_.str() << "]";
  return os.str();
}

bool operator==(const EigenvalueList& a, const EigenvalueList& b) {
  auto same = [](const std::vector<Eigenvalue>& x, const std::vector<Eigenvalue>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].multiplicity != y[i].multiplicity || !x[i].value.same_as(y[i].value)) return false;
    }
    return true;
  };
  if (!same(a.head_, b.head_) || a.tail_.has_value() != b.tail_.has_value()) return false;
  if (!a.residual_.same_as(b.residual_)) return false;
  if (!a.tail_) return true;
  return a.tail_->ratio.same_as(b.tail_->ratio) && same(a.tail_->seeds, b.tail_->seeds);
}

EigenvalueList corner_list(const CompactOpenSet& K, const CompactOpenSet& L, MeasureKind mu, MeasureKind nu) {
  const std::uint64_t p = K.prime();
  if (L.prime() != p) throw PrimeMismatch("K and L use different primes");
  NamedSubgroup group;
  switch (K.expr().kind()) {
    case SetExpr::Kind::Units: group = NamedSubgroup::units(); break;
    case SetExpr::Kind::PrincipalUnits:
      group = NamedSubgroup::principal_units(static_cast<unsigned>(K.expr().node().level));
      break;
    default: throw PreconditionViolation("K must be units or one_plus_p(k), got " + K.expr().str());
  }
  const Rational mk = measure(K, mu);
  if (mk != 1) throw NotNormalized(to_string(mu) + "(K) = " + to_string(mk) + ", expected 1");
  const Rational ml = measure(L, nu);
  if (ml != 1) throw NotNormalized(to_string(nu) + "(L) = " + to_string(ml) + ", expected 1");
  const long e = L.lower_level();
  if (e < 0) throw PreconditionViolation("L must lie in Z_p");
  require_invariant(L, group);

  const Rational scale = measure(K, MeasureKind::Add) / measure(L, MeasureKind::Add);
  const long start_tail = std::max(L.resolution(), e);
  std::vector<Eigenvalue> head;
  for (long n = e; n < start_tail; ++n) {
    const std::uint64_t count = coset_count(L, n, group);
    if (count > 0) head.push_back({Real(scale * rpow(Rational(p), -n)), count});
  }
  // Past the resolution every sphere lies wholly inside or outside L.
  std::optional<GeometricTail> tail;
  const std::uint64_t count = coset_count(L, start_tail, group);
  if (count > 0) {
    tail = GeometricTail{Real(Rational(1, p)), {{Real(scale * rpow(Rational(p), -start_tail)), count}}};
  }
  return EigenvalueList(std::move(head), std::move(tail));
}

namespace {

std::vector<Eigenvalue> products(const std::vector<Eigenvalue>& a, const std::vector<Eigenvalue>& b) {
  std::vector<Eigenvalue> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back({x.value * y.value, x.multiplicity * y.multiplicity});
  }
  return out;
}

}  // namespace

EigenvalueList tensor(const EigenvalueList& a, const EigenvalueList& b, std::size_t max_levels) {
  if (a.tail() && b.tail()) {
    std::vector<Eigenvalue> all = products(a.levels(max_levels), b.levels(max_levels));
    merge_sorted(all);
    if (all.size() > max_levels) all.resize(max_levels);
    const Real kept = sum(all);
    return EigenvalueList(std::move(all), std::nullopt, Real(1) - kept);
  }
  std::vector<Eigenvalue> head = products(a.head(), b.head());
  std::optional<GeometricTail> tail;
  if (a.tail()) tail = GeometricTail{a.tail()->ratio, products(a.tail()->seeds, b.head())};
  if (b.tail()) tail = GeometricTail{b.tail()->ratio, products(b.tail()->seeds, a.head())};
  EigenvalueList out(std::move(head), std::move(tail));
  if (a.is_truncated() || b.is_truncated()) {
    return EigenvalueList(out.head(), out.tail(), Real(1) - out.mass());
  }
  return out;
}

EigenvalueList tensor_exact(const EigenvalueList& a, const EigenvalueList& b) {
  if (a.tail() && b.tail()) {
    throw TailBlowup("product of two geometric tails is not geometric (ratios " + a.tail()->ratio.str() + ", " +
                     b.tail()->ratio.str() + ")");
  }
  return tensor(a, b);
}

EigenvalueList remove_sublist(const EigenvalueList& list, const EigenvalueList& copy) {
  std::vector<Eigenvalue> head = list.head();
  std::vector<Eigenvalue> seeds = list.tail() ? list.tail()->seeds : std::vector<Eigenvalue>{};
  std::vector<Eigenvalue> chead = copy.head();
  std::vector<Eigenvalue> cseeds = copy.tail() ? copy.tail()->seeds : std::vector<Eigenvalue>{};
  if (copy.tail() && (!list.tail() || !list.tail()->ratio.same_as(copy.tail()->ratio))) {
    throw PreconditionViolation("removed sequence does not match the list's tail");
  }
  if (list.tail()) {
    // Roll both lists below every value of the copy's head, so each removed
    // term is either a head entry or a seed of the common window.
    const Real& r = list.tail()->ratio;
    Real bound = min_seed(seeds);
    auto lower = [&bound](const Real& v) {
      if (v.mid() < bound.mid()) bound = v;
    };
    if (!cseeds.empty()) lower(min_seed(cseeds));
    for (const auto& c : chead) lower(c.value * r);
    roll_to(head, seeds, r, bound);
    roll_to(chead, cseeds, r, bound);
  }
  auto subtract = [](std::vector<Eigenvalue>& from, std::vector<Eigenvalue> what) {
    merge_sorted(from);
    merge_sorted(what);
    for (const auto& w : what) {
      auto it = std::find_if(from.begin(), from.end(), [&](const Eigenvalue& e) { return e.value.same_as(w.value); });
      if (it == from.end() || it->multiplicity < w.multiplicity) {
        throw PreconditionViolation("value " + w.value.str() + " is not in the list with enough multiplicity");
      }
      it->multiplicity -= w.multiplicity;
    }
  };
  subtract(head, chead);
  subtract(seeds, cseeds);
  const Real keep = Real(1) - copy.mass();
  if (!definitely_greater(keep, Real(0))) throw PreconditionViolation("removing the whole mass");
  for (auto& e : head) e.value = e.value / keep;
  for (auto& e : seeds) e.value = e.value / keep;
  std::optional<GeometricTail> tail;
  if (list.tail()) tail = GeometricTail{list.tail()->ratio, seeds};
  return EigenvalueList(std::move(head), std::move(tail));
}

nlohmann::json to_json(const EigenvalueList& list, std::size_t max_levels) {
  auto entries = [](const std::vector<Eigenvalue>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : v) arr.push_back({{"value", e.value.str()}, {"multiplicity", e.multiplicity}});
    return arr;
  };
  nlohmann::json j;
  j["head"] = entries(list.head());
  if (list.tail()) {
    j["tail"] = {{"ratio", list.tail()->ratio.str()}, {"seeds", entries(list.tail()->seeds)}};
  } else {
    j["tail"] = nullptr;
  }
  j["residual"] = list.residual().str();
  j["mass"] = list.mass().str();
  j["levels"] = entries(list.levels(max_levels));
  return j;
}

std::string to_csv(const EigenvalueList& list, std::size_t max_levels) {
  std::ostringstream os;
  os << "level,value,multiplicity\n";
  const auto rows = list.levels(max_levels);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << i << "," << rows[i].value.str() << "," << rows[i].multiplicity << "\n";
  }
  return os.str();
}

}  // namespace qgt
