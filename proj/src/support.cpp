#include "genlab/support.hpp"

#include <algorithm>
#include <sstream>

namespace genlab {

namespace {

std::optional<Int> int_value(const Point& p, Point::Kind pk) {
  if (p.kind() != pk) return std::nullopt;
  if (pk == Point::Kind::kAtom) return Int(static_cast<long>(p.atom_id()));
  if (pk == Point::Kind::kReal) {
    const Rat& v = p.real_value();
    if (v.get_den() != 1) return std::nullopt;
    return Int(v.get_num());
  }
  return std::nullopt;
}

Point to_point(Point::Kind pk, const Int& v) {
  if (pk == Point::Kind::kAtom) {
    if (!v.fits_slong_p()) throw std::out_of_range("atom id out of range: " + v.get_str());
    return Point::atom(v.get_si());
  }
  return Point::real(Rat(v));
}

Int mod_pos(const Int& x, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

const char* kind_name(Point::Kind pk) { return pk == Point::Kind::kAtom ? "atom" : "real"; }

}  // namespace

Atom Atom::finite(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), canonical_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Atom at;
  at.kind_ = Kind::kFinite;
  if (!pts.empty()) at.pk_ = pts.front().kind();
  at.points_ = std::move(pts);
  return at;
}

Atom Atom::lattice(Point::Kind pk, Int a, Int m) {
  if (m <= 0) throw std::invalid_argument("lattice step must be positive");
  if (pk == Point::Kind::kVec) throw std::invalid_argument("lattice needs real or atom points");
  Atom at;
  at.kind_ = Kind::kLattice;
  at.pk_ = pk;
  at.a_ = mod_pos(a, m);
  at.m_ = std::move(m);
  return at;
}

Atom Atom::int_set(Point::Kind pk, IndexSet values) {
  if (pk == Point::Kind::kVec) throw std::invalid_argument("intset needs real or atom points");
  Atom at;
  at.kind_ = Kind::kIntSet;
  at.pk_ = pk;
  at.idx_ = std::move(values);
  return at;
}

Atom Atom::basis(QS2 scale, IndexSet indices) {
  if (scale.is_zero()) throw std::invalid_argument("basis scale must be nonzero");
  if (indices.lower() < 1) {
    indices = IndexSet::intersect(indices, IndexSet::all(1));
  }
  Atom at;
  at.kind_ = Kind::kBasis;
  at.pk_ = Point::Kind::kVec;
  at.scale_ = std::move(scale);
  at.idx_ = std::move(indices);
  return at;
}

bool Atom::contains(const Point& p) const {
  switch (kind_) {
    case Kind::kFinite:
      return std::binary_search(points_.begin(), points_.end(), p, canonical_less);
    case Kind::kLattice: {
      auto v = int_value(p, pk_);
      return v && mod_pos(*v - a_, m_) == 0;
    }
    case Kind::kIntSet: {
      auto v = int_value(p, pk_);
      return v && idx_.contains(*v);
    }
    case Kind::kBasis:
      return p.is_axis_point() && p.axis_coord() == scale_ && idx_.contains(p.axis());
  }
  return false;
}

bool Atom::is_empty() const {
  switch (kind_) {
    case Kind::kFinite:
      return points_.empty();
    case Kind::kLattice:
      return false;
    default: {
      auto inf = idx_.is_infinite();
      if (inf && *inf) return false;
      return !idx_.first(1000).has_value();
    }
  }
}

std::optional<bool> Atom::is_infinite() const {
  switch (kind_) {
    case Kind::kFinite:
      return false;
    case Kind::kLattice:
      return true;
    default:
      return idx_.is_infinite();
  }
}

std::string Atom::format() const {
  switch (kind_) {
    case Kind::kFinite: {
      std::string s = "finite:";
      for (const auto& p : points_) s += " " + format_point(p);
      return s;
    }
    case Kind::kLattice:
      return std::string("family: lattice kind=") + kind_name(pk_) + " a=" + a_.get_str() +
             " m=" + m_.get_str();
    case Kind::kIntSet:
      return std::string("family: intset kind=") + kind_name(pk_) + " indices=" + idx_.format();
    case Kind::kBasis:
      return "family: basis scale=" + format_qs2(scale_) + " indices=" + idx_.format();
  }
  return "";
}

Atom intersect(const Atom& x, const Atom& y) {
  using K = Atom::Kind;
  if (x.kind() == K::kFinite || y.kind() == K::kFinite) {
    const Atom& f = x.kind() == K::kFinite ? x : y;
    const Atom& o = x.kind() == K::kFinite ? y : x;
    std::vector<Point> kept;
    for (const auto& p : f.points())
      if (o.contains(p)) kept.push_back(p);
    return Atom::finite(std::move(kept));
  }
  if (x.point_kind() != y.point_kind()) return Atom::finite({});
  if (x.kind() == K::kLattice && y.kind() == K::kLattice) {
    auto c = crt(x.a(), x.m(), y.a(), y.m());
    if (!c) return Atom::finite({});
    return Atom::lattice(x.point_kind(), c->first, c->second);
  }
  if (x.kind() == K::kLattice || y.kind() == K::kLattice) {
    const Atom& l = x.kind() == K::kLattice ? x : y;
    const Atom& o = x.kind() == K::kLattice ? y : x;
    if (o.kind() != K::kIntSet) return Atom::finite({});
    return Atom::int_set(o.point_kind(),
                         IndexSet::intersect(o.indices(),
                                             IndexSet::residue(l.a(), l.m(), o.indices().lower())));
  }
  if (x.kind() == K::kIntSet && y.kind() == K::kIntSet) {
    return Atom::int_set(x.point_kind(), IndexSet::intersect(x.indices(), y.indices()));
  }
  if (x.kind() == K::kBasis && y.kind() == K::kBasis && x.scale() == y.scale()) {
    return Atom::basis(x.scale(), IndexSet::intersect(x.indices(), y.indices()));
  }
  return Atom::finite({});
}

AtomCursor::AtomCursor(Atom atom, std::size_t budget) : atom_(std::move(atom)), budget_(budget) {
  if (atom_.kind() == Atom::Kind::kLattice) {
    up_ = atom_.a();
    down_ = mod_pos(-atom_.a(), atom_.m());
    if (down_ == 0) down_ = atom_.m();
  }
}

std::optional<Point> AtomCursor::next() {
  switch (atom_.kind()) {
    case Atom::Kind::kFinite:
      if (pos_ >= atom_.points().size()) return std::nullopt;
      return atom_.points()[pos_++];
    case Atom::Kind::kLattice:
      if (up_ <= down_) {
        Int v = up_;
        up_ += atom_.m();
        return to_point(atom_.point_kind(), v);
      } else {
        Int v = -down_;
        down_ += atom_.m();
        return to_point(atom_.point_kind(), v);
      }
    default:
      if (!started_) {
        cur_ = atom_.indices().first(budget_);
        started_ = true;
      } else if (cur_) {
        cur_ = atom_.indices().next_after(*cur_, budget_);
      }
      if (!cur_) return std::nullopt;
      if (atom_.kind() == Atom::Kind::kBasis) return Point::basis(*cur_, atom_.scale());
      return to_point(atom_.point_kind(), *cur_);
  }
}

std::string SeparationWitness::describe() const {
  std::string k = kind == Kind::kSeparated   ? "separated"
                  : kind == Kind::kSingleton ? "singleton"
                                             : "orthogonal";
  std::string s = k + " [" + family.format() + "] sep_sq=" + format_qs2(separation_sq) +
                  " radius=" + format_rat(radius);
  if (kind == Kind::kOrthogonal) s += " weight=" + format_rat(weight);
  return s;
}

bool verify_witness(const Metric& m, const SeparationWitness& w, std::size_t samples) {
  QS2 r2(w.radius * w.radius);
  switch (w.kind) {
    case SeparationWitness::Kind::kSeparated:
      if (compare(w.separation_sq, QS2(Rat(4) * w.radius * w.radius)) <= 0) return false;
      break;
    case SeparationWitness::Kind::kSingleton:
      if (m.kind != Metric::Kind::kDiscrete || w.radius >= 1) return false;
      break;
    case SeparationWitness::Kind::kOrthogonal: {
      if (w.family.kind() != Atom::Kind::kBasis) return false;
      QS2 c2 = w.family.scale() * w.family.scale();
      if (compare(c2 * w.weight, r2) <= 0) return false;
      if (w.separation_sq != c2 * (Rat(2) * w.weight)) return false;
      break;
    }
  }
  auto inf = w.family.is_infinite();
  if (!inf || !*inf) return false;
  auto pts = Support({w.family}).enumerate(samples);
  if (pts.size() < samples) return false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w.kind == SeparationWitness::Kind::kOrthogonal && m.weight(pts[i].axis()) < w.weight) {
      return false;
    }
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (compare(dist_sq(m, pts[i], pts[j]), w.separation_sq) < 0) return false;
    }
  }
  return true;
}

std::string format_cover(const CoverResult& c) {
  switch (c.kind) {
    case CoverResult::Kind::kFinite:
      return std::string(c.exact ? "finite " : "finite<= ") + std::to_string(c.n);
    case CoverResult::Kind::kInfinite:
      return "infinite " + c.witness->describe();
    case CoverResult::Kind::kUnknown:
      return "unknown lower=" + std::to_string(c.n) + " budget=" + std::to_string(c.budget);
  }
  return "";
}

Support::Support(std::vector<Atom> atoms) {
  for (auto& a : atoms)
    if (!a.is_empty()) atoms_.push_back(std::move(a));
}

bool Support::contains(const Point& p) const {
  return std::any_of(atoms_.begin(), atoms_.end(), [&](const Atom& a) { return a.contains(p); });
}

std::optional<bool> Support::is_finite() const {
  bool unknown = false;
  for (const auto& a : atoms_) {
    auto inf = a.is_infinite();
    if (!inf) unknown = true;
    else if (*inf) return false;
  }
  if (unknown) return std::nullopt;
  return true;
}

SupportCursor::SupportCursor(const Support& s, std::size_t budget) {
  for (const auto& a : s.atoms()) cursors_.emplace_back(a, budget);
  done_.assign(cursors_.size(), false);
}

std::optional<Point> SupportCursor::next() {
  std::size_t idle = 0;
  while (idle < cursors_.size()) {
    std::size_t i = turn_;
    turn_ = (turn_ + 1) % cursors_.size();
    if (done_[i]) {
      ++idle;
      continue;
    }
    while (true) {
      auto p = cursors_[i].next();
      if (!p) {
        done_[i] = true;
        ++idle;
        break;
      }
      if (emitted_.insert(*p).second) return p;
    }
  }
  return std::nullopt;
}

SupportCursor Support::cursor(std::size_t budget) const { return SupportCursor(*this, budget); }

std::vector<Point> Support::enumerate(std::size_t n, std::size_t budget) const {
  std::vector<Point> out;
  if (n == 0) return out;
  auto cur = cursor(budget);
  while (out.size() < n) {
    auto p = cur.next();
    if (!p) break;
    out.push_back(std::move(*p));
  }
  return out;
}

std::optional<std::vector<Point>> Support::finite_points(std::size_t budget) const {
  auto fin = is_finite();
  if (!fin || !*fin) return std::nullopt;
  std::vector<Point> out;
  auto cur = cursor(budget);
  while (auto p = cur.next()) {
    out.push_back(std::move(*p));
    if (out.size() > budget) return std::nullopt;
  }
  return out;
}

namespace {

CoverResult cover_discrete(const std::vector<Atom>& atoms, const Rat& radius, std::size_t budget) {
  bool nonempty = !atoms.empty();
  if (radius >= 1) return CoverResult::finite(nonempty ? 1 : 0);
  std::vector<Point> pts;
  bool unknown = false;
  for (const auto& a : atoms) {
    auto inf = a.is_infinite();
    if (inf && *inf) {
      SeparationWitness w;
      w.kind = SeparationWitness::Kind::kSingleton;
      w.family = a;
      w.separation_sq = QS2(Rat(1));
      w.radius = radius;
      return CoverResult::infinite(w);
    }
    if (!inf) {
      unknown = true;
      continue;
    }
    auto fp = Support({a}).finite_points(budget);
    if (!fp) {
      unknown = true;
      continue;
    }
    pts.insert(pts.end(), fp->begin(), fp->end());
  }
  std::size_t n = dedup_points(pts).size();
  if (unknown) return CoverResult::unknown(n, budget);
  return CoverResult::finite(n);
}

CoverResult cover_abs(const std::vector<Atom>& atoms, const Rat& radius, std::size_t budget) {
  Metric m = Metric::abs();
  std::vector<Point> pts;
  bool unknown = false;
  for (const auto& a : atoms) {
    if (a.point_kind() != Point::Kind::kReal) {
      throw MetricError("abs metric needs real points, got [" + a.format() + "]");
    }
    auto inf = a.is_infinite();
    if (inf && *inf) {
      SeparationWitness w;
      w.kind = SeparationWitness::Kind::kSeparated;
      w.radius = radius;
      Rat gap = Rat(2) * radius;
      if (a.kind() == Atom::Kind::kLattice) {
        Rat ratio = gap / Rat(a.m());
        Int j;
        mpz_fdiv_q(j.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
        j += 1;
        w.family = Atom::lattice(Point::Kind::kReal, a.a(), a.m() * j);
        w.separation_sq = QS2(Rat(a.m() * j * a.m() * j));
        return CoverResult::infinite(w);
      }
      auto th = a.indices().thinned(gap);
      if (th) {
        w.family = Atom::int_set(Point::Kind::kReal, th->first);
        w.separation_sq = QS2(Rat(th->second * th->second));
        return CoverResult::infinite(w);
      }
      unknown = true;
      continue;
    }
    if (!inf) {
      unknown = true;
      continue;
    }
    auto fp = Support({a}).finite_points(budget);
    if (!fp) {
      unknown = true;
      continue;
    }
    pts.insert(pts.end(), fp->begin(), fp->end());
  }
  if (unknown) return CoverResult::unknown(packing_greedy(m, dedup_points(pts), radius), budget);
  return CoverResult::finite(cover_count(m, pts, radius));
}

CoverResult cover_vec(const Metric& m, const std::vector<Atom>& atoms, const Rat& radius,
                      std::size_t budget) {
  QS2 r2(radius * radius);
  std::vector<Point> pts;
  bool unknown = false;
  bool origin = false;
  for (const auto& a : atoms) {
    if (a.point_kind() != Point::Kind::kVec) {
      throw MetricError("vector metric needs vector points, got [" + a.format() + "]");
    }
    if (a.kind() == Atom::Kind::kFinite) {
      pts.insert(pts.end(), a.points().begin(), a.points().end());
      continue;
    }
    QS2 c2 = a.scale() * a.scale();
    std::vector<std::pair<IndexSet, Rat>> parts;
    if (m.even_weight == m.odd_weight) {
      parts.emplace_back(a.indices(), m.even_weight);
    } else {
      const Int lo = a.indices().lower();
      parts.emplace_back(IndexSet::intersect(a.indices(), IndexSet::residue(0, 2, lo)),
                         m.even_weight);
      parts.emplace_back(IndexSet::intersect(a.indices(), IndexSet::residue(1, 2, lo)),
                         m.odd_weight);
    }
    for (const auto& [idx, w] : parts) {
      Atom part = Atom::basis(a.scale(), idx);
      if (part.is_empty()) continue;
      if (compare(c2 * w, r2) <= 0) {
        origin = true;
        continue;
      }
      auto inf = idx.is_infinite();
      if (inf && *inf) {
        SeparationWitness wit;
        wit.kind = SeparationWitness::Kind::kOrthogonal;
        wit.family = part;
        wit.separation_sq = c2 * (Rat(2) * w);
        wit.radius = radius;
        wit.weight = w;
        return CoverResult::infinite(wit);
      }
      auto fp = inf ? Support({part}).finite_points(budget) : std::nullopt;
      if (!fp) {
        unknown = true;
        continue;
      }
      pts.insert(pts.end(), fp->begin(), fp->end());
    }
  }
  pts = dedup_points(pts);
  if (unknown) return CoverResult::unknown(packing_greedy(m, pts, radius), budget);
  if (!origin) return CoverResult::finite(cover_count(m, pts, radius));
  std::vector<Point> rest;
  for (const auto& p : pts)
    if (!in_ball(m, Point::origin(), radius, p)) rest.push_back(p);
  if (rest.empty()) return CoverResult::finite(1);
  return CoverResult::finite(1 + cover_count(m, rest, radius), false);
}

}  // namespace

CoverResult Support::cover_number(const Metric& m, const Rat& radius, std::size_t budget) const {
  switch (m.kind) {
    case Metric::Kind::kDiscrete:
      return cover_discrete(atoms_, radius, budget);
    case Metric::Kind::kAbs:
      return cover_abs(atoms_, radius, budget);
    default:
      return cover_vec(m, atoms_, radius, budget);
  }
}

Support Support::intersect(const Support& o) const {
  std::vector<Atom> out;
  for (const auto& x : atoms_)
    for (const auto& y : o.atoms_) out.push_back(genlab::intersect(x, y));
  return Support(std::move(out));
}

Support Support::unite(const Support& o) const {
  std::vector<Atom> out = atoms_;
  out.insert(out.end(), o.atoms_.begin(), o.atoms_.end());
  return Support(std::move(out));
}

std::vector<std::string> Support::format_lines() const {
  std::vector<std::string> out;
  for (const auto& a : atoms_) out.push_back(a.format());
  return out;
}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

Point::Kind parse_kind(const std::string& v) {
  if (v == "real") return Point::Kind::kReal;
  if (v == "atom") return Point::Kind::kAtom;
  throw ParseError("unknown point kind '" + v + "'");
}

}  // namespace

Atom parse_atom_line(std::string_view line) {
  auto toks = split_ws(line);
  if (toks.empty()) throw ParseError("empty support line");
  if (toks[0] == "finite:") {
    std::vector<Point> pts;
    for (std::size_t i = 1; i < toks.size(); ++i) pts.push_back(parse_point(toks[i]));
    return Atom::finite(std::move(pts));
  }
  if (toks[0] != "family:" || toks.size() < 2) {
    throw ParseError("support line must start with 'finite:' or 'family:'");
  }
  std::string kind, scale, indices, a, m;
  for (std::size_t i = 2; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (toks[i] == "sep-witness") continue;  // witnesses are derived, not read
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + toks[i] + "'");
    std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
    if (key == "kind") kind = val;
    else if (key == "scale") scale = val;
    else if (key == "indices") indices = val;
    else if (key == "a") a = val;
    else if (key == "m") m = val;
    else throw ParseError("unknown family key '" + key + "'");
  }
  try {
    if (toks[1] == "basis") return Atom::basis(parse_qs2(scale), parse_index_set(indices));
    if (toks[1] == "intset") return Atom::int_set(parse_kind(kind), parse_index_set(indices));
    if (toks[1] == "lattice") return Atom::lattice(parse_kind(kind), parse_int(a), parse_int(m));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown family '" + toks[1] + "'");
}

}  // namespace genlab
