#include "genlab/index_set.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace genlab {

struct IndexSet::Node {
  Kind kind = Kind::kExplicit;
  Int a, m, lo;      // residue / all
  Int s, q;          // geometric
  Int mul, add;      // affine
  std::vector<Int> values;      // explicit, sorted unique
  std::vector<IndexSet> parts;  // union / intersection / affine inner
};

namespace {

Int mod_pos(const Int& x, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int floor_div(const Int& x, const Int& m) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int ceil_div(const Int& x, const Int& m) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int inverse_mod(const Int& a, const Int& m) {
  Int inv;
  mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return inv;
}

// Largest modulus for which geometric-by-residue intersections are unrolled.
const Int kMaxUnroll = 100000;

}  // namespace

IndexSet IndexSet::all(Int lo) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAll;
  n->lo = std::move(lo);
  return IndexSet(n);
}

IndexSet IndexSet::residue(Int a, Int m, Int lo) {
  if (m <= 0) throw std::invalid_argument("residue modulus must be positive");
  if (m == 1) return all(std::move(lo));
  auto n = std::make_shared<Node>();
  n->kind = Kind::kResidue;
  n->a = mod_pos(a, m);
  n->m = std::move(m);
  n->lo = std::move(lo);
  return IndexSet(n);
}

IndexSet IndexSet::geometric(Int s, Int q) {
  if (s < 1 || q < 2) throw std::invalid_argument("geometric set needs s >= 1, q >= 2");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kGeometric;
  n->s = std::move(s);
  n->q = std::move(q);
  return IndexSet(n);
}

IndexSet IndexSet::explicit_set(std::vector<Int> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  auto n = std::make_shared<Node>();
  n->kind = Kind::kExplicit;
  n->values = std::move(values);
  return IndexSet(n);
}

IndexSet IndexSet::union_of(std::vector<IndexSet> parts) {
  std::vector<IndexSet> flat;
  std::vector<Int> loose;
  for (auto& p : parts) {
    if (p.kind() == Kind::kUnion) {
      for (const auto& c : p.node_->parts) flat.push_back(c);
    } else if (p.kind() == Kind::kExplicit) {
      loose.insert(loose.end(), p.node_->values.begin(), p.node_->values.end());
    } else {
      flat.push_back(p);
    }
  }
  if (!loose.empty()) flat.push_back(explicit_set(std::move(loose)));
  if (flat.empty()) return empty();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::kUnion;
  n->parts = std::move(flat);
  return IndexSet(n);
}

IndexSet IndexSet::affine(Int mul, Int add, IndexSet inner) {
  if (mul <= 0) throw std::invalid_argument("affine multiplier must be positive");
  if (mul == 1 && add == 0) return inner;
  if (inner.kind() == Kind::kExplicit) {
    std::vector<Int> v;
    for (const auto& x : inner.node_->values) v.push_back(mul * x + add);
    return explicit_set(std::move(v));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAffine;
  n->mul = std::move(mul);
  n->add = std::move(add);
  n->parts = {std::move(inner)};
  return IndexSet(n);
}

IndexSet IndexSet::dyadic(IndexSet odd_inner) {
  if (odd_inner.kind() == Kind::kExplicit && odd_inner.node_->values.empty()) return empty();
  auto n = std::make_shared<Node>();
  n->kind = Kind::kDyadic;
  n->parts = {std::move(odd_inner)};
  return IndexSet(n);
}

namespace {

// {n >= lo} intersected with s q^k: restart the progression at the first term >= lo.
IndexSet geometric_from(const Int& s, const Int& q, const Int& lo) {
  Int v = s;
  while (v < lo) v *= q;
  return IndexSet::geometric(v, q);
}

}  // namespace

IndexSet IndexSet::intersect(const IndexSet& x, const IndexSet& y) {
  Kind kx = x.kind(), ky = y.kind();
  if (kx == Kind::kExplicit || ky == Kind::kExplicit) {
    const IndexSet& e = kx == Kind::kExplicit ? x : y;
    const IndexSet& o = kx == Kind::kExplicit ? y : x;
    std::vector<Int> v;
    for (const auto& val : e.node_->values)
      if (o.contains(val)) v.push_back(val);
    return explicit_set(std::move(v));
  }
  if (kx == Kind::kUnion || ky == Kind::kUnion) {
    const IndexSet& u = kx == Kind::kUnion ? x : y;
    const IndexSet& o = kx == Kind::kUnion ? y : x;
    std::vector<IndexSet> parts;
    for (const auto& p : u.node_->parts) parts.push_back(intersect(p, o));
    return union_of(std::move(parts));
  }
  if (kx == Kind::kAll || ky == Kind::kAll) {
    const IndexSet& al = kx == Kind::kAll ? x : y;
    const IndexSet& o = kx == Kind::kAll ? y : x;
    const Int& lo = al.node_->lo;
    switch (o.kind()) {
      case Kind::kAll:
        return all(std::max(lo, o.node_->lo));
      case Kind::kResidue:
        return residue(o.node_->a, o.node_->m, std::max(lo, o.node_->lo));
      case Kind::kGeometric:
        return geometric_from(o.node_->s, o.node_->q, lo);
      case Kind::kAffine: {
        const auto& on = *o.node_;
        Int inner_lo = ceil_div(lo - on.add, on.mul);
        return affine(on.mul, on.add, intersect(on.parts[0], all(inner_lo)));
      }
      default:
        break;
    }
  }
  if (kx == Kind::kResidue && ky == Kind::kResidue) {
    const auto& nx = *x.node_;
    const auto& ny = *y.node_;
    Int g;
    mpz_gcd(g.get_mpz_t(), nx.m.get_mpz_t(), ny.m.get_mpz_t());
    Int lo = std::max(nx.lo, ny.lo);
    if (mod_pos(ny.a - nx.a, g) != 0) return empty();
    // a = nx.a + nx.m t with nx.m t = ny.a - nx.a (mod ny.m)
    Int m2 = ny.m / g;
    Int t = m2 == 1 ? Int(0) : mod_pos(((ny.a - nx.a) / g) * inverse_mod(nx.m / g, m2), m2);
    Int lcm = nx.m * m2;
    return residue(nx.a + nx.m * t, lcm, lo);
  }
  if (kx == Kind::kResidue || ky == Kind::kResidue) {
    const IndexSet& r = kx == Kind::kResidue ? x : y;
    const IndexSet& o = kx == Kind::kResidue ? y : x;
    const auto& rn = *r.node_;
    if (o.kind() == Kind::kAffine) {
      const auto& on = *o.node_;
      // mul i + add = a (mod m)
      Int g;
      mpz_gcd(g.get_mpz_t(), on.mul.get_mpz_t(), rn.m.get_mpz_t());
      if (mod_pos(rn.a - on.add, g) != 0) return empty();
      Int m2 = rn.m / g;
      Int i0 = m2 == 1 ? Int(0)
                       : mod_pos(((rn.a - on.add) / g) * inverse_mod(on.mul / g, m2), m2);
      Int inner_lo = ceil_div(rn.lo - on.add, on.mul);
      IndexSet inner = intersect(on.parts[0], residue(i0, m2, inner_lo));
      return affine(on.mul, on.add, inner);
    }
    if (o.kind() == Kind::kGeometric && rn.m <= kMaxUnroll) {
      // s q^n mod m is eventually periodic; unroll into geometric pieces.
      const auto& on = *o.node_;
      std::map<Int, std::size_t> first_seen;
      std::vector<Int> terms;
      Int v = on.s;
      std::size_t start = 0, period = 0;
      for (std::size_t n = 0;; ++n) {
        Int res = mod_pos(v, rn.m);
        auto it = first_seen.find(res);
        if (it != first_seen.end()) {
          start = it->second;
          period = n - start;
          break;
        }
        first_seen.emplace(res, n);
        terms.push_back(v);
        v *= on.q;
      }
      std::vector<IndexSet> parts;
      std::vector<Int> pre;
      Int qp = 1;
      for (std::size_t i = 0; i < period; ++i) qp *= on.q;
      for (std::size_t n = 0; n < terms.size(); ++n) {
        if (mod_pos(terms[n], rn.m) != rn.a) continue;
        if (n < start) {
          pre.push_back(terms[n]);
        } else {
          parts.push_back(qp >= 2 ? geometric(terms[n], qp) : explicit_set({terms[n]}));
        }
      }
      parts.push_back(explicit_set(std::move(pre)));
      return intersect(union_of(std::move(parts)), all(rn.lo));
    }
  }
  if (kx == Kind::kAffine && ky == Kind::kAffine && x.node_->mul == y.node_->mul &&
      x.node_->add == y.node_->add) {
    return affine(x.node_->mul, x.node_->add, intersect(x.node_->parts[0], y.node_->parts[0]));
  }
  if (kx == Kind::kDyadic && ky == Kind::kDyadic) {
    return dyadic(intersect(x.node_->parts[0], y.node_->parts[0]));
  }
  if (kx == Kind::kGeometric && ky == Kind::kGeometric && x.node_->q == y.node_->q) {
    // Same ratio: the progressions are nested or disjoint.
    const auto& a = *x.node_;
    const auto& b = *y.node_;
    const Int& big = a.s >= b.s ? a.s : b.s;
    if (x.contains(big) && y.contains(big)) return geometric(big, a.q);
    return empty();
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kIntersection;
  n->parts = {x, y};
  return IndexSet(n);
}

IndexSet::Kind IndexSet::kind() const { return node_->kind; }

bool IndexSet::contains(const Int& v) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kAll:
      return v >= n.lo;
    case Kind::kResidue:
      return v >= n.lo && mod_pos(v, n.m) == n.a;
    case Kind::kGeometric: {
      if (v < n.s) return false;
      Int x = v;
      if (mod_pos(x, n.s) != 0) return false;
      x /= n.s;
      while (x > 1) {
        if (mod_pos(x, n.q) != 0) return false;
        x /= n.q;
      }
      return true;
    }
    case Kind::kExplicit:
      return std::binary_search(n.values.begin(), n.values.end(), v);
    case Kind::kUnion:
      return std::any_of(n.parts.begin(), n.parts.end(),
                         [&](const IndexSet& p) { return p.contains(v); });
    case Kind::kIntersection:
      return std::all_of(n.parts.begin(), n.parts.end(),
                         [&](const IndexSet& p) { return p.contains(v); });
    case Kind::kAffine: {
      Int d = v - n.add;
      if (mod_pos(d, n.mul) != 0) return false;
      return n.parts[0].contains(d / n.mul);
    }
    case Kind::kDyadic: {
      if (v < 1) return false;
      Int o = v;
      while (mod_pos(o, 2) == 0) o /= 2;
      return n.parts[0].contains(o);
    }
  }
  return false;
}

std::optional<Int> IndexSet::next_after(const Int& v, std::size_t budget) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kAll:
      return std::max(Int(v + 1), n.lo);
    case Kind::kResidue: {
      Int y = std::max(Int(v + 1), n.lo);
      return Int(y + mod_pos(n.a - y, n.m));
    }
    case Kind::kGeometric: {
      Int x = n.s;
      while (x <= v) x *= n.q;
      return x;
    }
    case Kind::kExplicit: {
      auto it = std::upper_bound(n.values.begin(), n.values.end(), v);
      if (it == n.values.end()) return std::nullopt;
      return *it;
    }
    case Kind::kUnion: {
      std::optional<Int> best;
      for (const auto& p : n.parts) {
        auto c = p.next_after(v, budget);
        if (c && (!best || *c < *best)) best = c;
      }
      return best;
    }
    case Kind::kIntersection: {
      Int cur = v;
      for (std::size_t step = 0; step < budget; ++step) {
        auto c = n.parts[0].next_after(cur, budget);
        if (!c) return std::nullopt;
        bool ok = true;
        for (std::size_t i = 1; i < n.parts.size() && ok; ++i) ok = n.parts[i].contains(*c);
        if (ok) return c;
        cur = *c;
      }
      return std::nullopt;
    }
    case Kind::kAffine: {
      auto c = n.parts[0].next_after(floor_div(v - n.add, n.mul), budget);
      if (!c) return std::nullopt;
      return Int(n.mul * *c + n.add);
    }
    case Kind::kDyadic: {
      const IndexSet& in = n.parts[0];
      auto odd_after = [&](Int x) -> std::optional<Int> {
        for (std::size_t step = 0; step < budget; ++step) {
          auto c = in.next_after(x, budget);
          if (!c || mod_pos(*c, 2) == 1) return c;
          x = *c;
        }
        return std::nullopt;
      };
      auto f = odd_after(Int(0));
      if (!f) return std::nullopt;
      std::optional<Int> best;
      for (Int p = 1;; p *= 2) {
        if (p * *f > v) {
          if (!best || p * *f < *best) best = Int(p * *f);
          break;
        }
        auto c = odd_after(floor_div(v, p));
        if (c && (!best || p * *c < *best)) best = Int(p * *c);
      }
      return best;
    }
  }
  return std::nullopt;
}

Int IndexSet::lower() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kAll:
    case Kind::kResidue:
      return n.lo;
    case Kind::kGeometric:
      return n.s;
    case Kind::kExplicit:
      return n.values.empty() ? Int(0) : n.values.front();
    case Kind::kUnion: {
      Int lo = n.parts[0].lower();
      for (const auto& p : n.parts) lo = std::min(lo, p.lower());
      return lo;
    }
    case Kind::kIntersection: {
      Int lo = n.parts[0].lower();
      for (const auto& p : n.parts) lo = std::max(lo, p.lower());
      return lo;
    }
    case Kind::kAffine:
      return n.mul * n.parts[0].lower() + n.add;
    case Kind::kDyadic:
      return std::max(Int(1), n.parts[0].lower());
  }
  return 0;
}

std::optional<Int> IndexSet::first(std::size_t budget) const {
  return next_after(lower() - 1, budget);
}

std::optional<bool> IndexSet::is_infinite() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kAll:
    case Kind::kResidue:
    case Kind::kGeometric:
      return true;
    case Kind::kExplicit:
      return false;
    case Kind::kAffine:
      return n.parts[0].is_infinite();
    case Kind::kDyadic: {
      auto r = n.parts[0].is_infinite();
      if (!r || *r) return r;
      return !n.parts[0].take(1).empty();
    }
    case Kind::kUnion: {
      bool unknown = false;
      for (const auto& p : n.parts) {
        auto r = p.is_infinite();
        if (!r) unknown = true;
        else if (*r) return true;
      }
      if (unknown) return std::nullopt;
      return false;
    }
    case Kind::kIntersection:
      for (const auto& p : n.parts) {
        auto r = p.is_infinite();
        if (r && !*r) return false;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<Int> IndexSet::take(std::size_t count, std::size_t budget) const {
  std::vector<Int> out;
  if (count == 0) return out;
  auto c = first(budget);
  while (c && out.size() < count) {
    out.push_back(*c);
    if (out.size() == count) break;
    c = next_after(*c, budget);
  }
  return out;
}

std::string IndexSet::format() const {
  const Node& n = *node_;
  auto join = [&](const char* tag) {
    std::string s = std::string(tag) + "(";
    for (std::size_t i = 0; i < n.parts.size(); ++i) {
      if (i) s += ";";
      s += n.parts[i].format();
    }
    return s + ")";
  };
  switch (n.kind) {
    case Kind::kAll:
      return "all:" + n.lo.get_str();
    case Kind::kResidue:
      return "residue:" + n.a.get_str() + "/" + n.m.get_str() + ":" + n.lo.get_str();
    case Kind::kGeometric:
      if (n.s == n.q) return "powers:" + n.q.get_str();
      return "geom:" + n.s.get_str() + "*" + n.q.get_str();
    case Kind::kExplicit: {
      std::string s = "explicit:";
      for (std::size_t i = 0; i < n.values.size(); ++i) {
        if (i) s += ",";
        s += n.values[i].get_str();
      }
      return s;
    }
    case Kind::kUnion:
      return join("union");
    case Kind::kIntersection:
      return join("inter");
    case Kind::kAffine:
      return "affine:" + n.mul.get_str() + "," + n.add.get_str() + "(" + n.parts[0].format() +
             ")";
    case Kind::kDyadic:
      return "dyadic(" + n.parts[0].format() + ")";
  }
  return "";
}

namespace {

class IndexParser {
 public:
  explicit IndexParser(std::string_view t) : text_(t) {}

  IndexSet parse_all() {
    IndexSet s = parse();
    if (pos_ != text_.size()) fail("trailing input");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("index set '" + std::string(text_) + "': " + why);
  }

  bool eat(std::string_view lit) {
    if (text_.substr(pos_, lit.size()) == lit) {
      pos_ += lit.size();
      return true;
    }
    return false;
  }

  Int number() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return parse_int(text_.substr(start, pos_ - start));
  }

  std::vector<IndexSet> list() {
    if (!eat("(")) fail("expected '('");
    std::vector<IndexSet> parts{parse()};
    while (eat(";")) parts.push_back(parse());
    if (!eat(")")) fail("expected ')'");
    return parts;
  }

  IndexSet parse() {
    if (eat("evens")) return IndexSet::residue(0, 2, 2);
    if (eat("odds")) return IndexSet::residue(1, 2, 1);
    if (eat("all")) {
      Int lo = 1;
      if (eat(":")) lo = number();
      return IndexSet::all(lo);
    }
    if (eat("residue:")) {
      Int a = number();
      if (!eat("/")) fail("expected '/'");
      Int m = number();
      Int lo = 1;
      if (eat(":")) lo = number();
      return IndexSet::residue(a, m, lo);
    }
    if (eat("powers:")) return IndexSet::powers(number());
    if (eat("geom:")) {
      Int s = number();
      if (!eat("*")) fail("expected '*'");
      return IndexSet::geometric(s, number());
    }
    if (eat("explicit:")) {
      std::vector<Int> v;
      if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                  text_[pos_] == '-')) {
        v.push_back(number());
        while (eat(",")) v.push_back(number());
      }
      return IndexSet::explicit_set(std::move(v));
    }
    if (eat("union")) return IndexSet::union_of(list());
    if (eat("dyadic")) {
      auto parts = list();
      if (parts.size() != 1) fail("dyadic takes one inner set");
      return IndexSet::dyadic(parts[0]);
    }
    if (eat("inter")) {
      auto parts = list();
      IndexSet acc = parts[0];
      for (std::size_t i = 1; i < parts.size(); ++i) acc = IndexSet::intersect(acc, parts[i]);
      return acc;
    }
    if (eat("affine:")) {
      Int mul = number();
      if (!eat(",")) fail("expected ','");
      Int add = number();
      auto parts = list();
      if (parts.size() != 1) fail("affine takes one inner set");
      return IndexSet::affine(mul, add, parts[0]);
    }
    fail("unknown index set kind");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

IndexSet parse_index_set(std::string_view text) {
  try {
    return IndexParser(text).parse_all();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace genlab

namespace genlab {

std::optional<std::pair<IndexSet, Int>> IndexSet::thinned(const Rat& gap) const {
  const Node& n = *node_;
  // smallest j >= 1 with step * j > gap
  auto stride = [&](const Int& step) {
    Rat ratio = gap / Rat(step);
    Int j = floor_div(ratio.get_num(), ratio.get_den()) + 1;
    return j < 1 ? Int(1) : j;
  };
  switch (n.kind) {
    case Kind::kAll: {
      Int j = stride(1);
      return std::make_pair(residue(n.lo, j, n.lo), j);
    }
    case Kind::kResidue: {
      Int j = stride(n.m);
      Int start = *next_after(n.lo - 1);
      return std::make_pair(residue(start, n.m * j, n.lo), Int(n.m * j));
    }
    case Kind::kGeometric: {
      Int x = n.s;
      while (Rat(x * (n.q - 1)) <= gap) x *= n.q;
      return std::make_pair(geometric(x, n.q), Int(x * (n.q - 1)));
    }
    case Kind::kAffine: {
      auto inner = n.parts[0].thinned(gap / Rat(n.mul));
      if (!inner) return std::nullopt;
      return std::make_pair(affine(n.mul, n.add, inner->first), Int(inner->second * n.mul));
    }
    case Kind::kUnion:
      for (const auto& p : n.parts) {
        auto inf = p.is_infinite();
        if (inf && *inf) return p.thinned(gap);
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<std::pair<Int, Int>> crt(const Int& a1, const Int& m1, const Int& a2,
                                       const Int& m2) {
  IndexSet r = IndexSet::intersect(IndexSet::residue(a1, m1, 0), IndexSet::residue(a2, m2, 0));
  if (r.kind() == IndexSet::Kind::kExplicit) return std::nullopt;
  Int lcm;
  mpz_lcm(lcm.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
  return std::make_pair(*r.first(), lcm);
}

}  // namespace genlab
