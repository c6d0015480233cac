#include "genlab/fixtures.hpp"

namespace genlab {

namespace {

void check_spec(const EmbeddingSpec& e) {
  if (e.target.kind == Metric::Kind::kDiscrete) {
    if (e.r >= 1) throw FixtureError("discrete embedding needs r < 1");
    return;
  }
  if (e.target.kind != Metric::Kind::kAbs) throw FixtureError("embedding targets discrete or abs only");
  if (e.spacing <= 0) throw FixtureError("embedding spacing must be a positive integer");
  if (Rat(e.spacing) <= e.r) throw FixtureError("embedding spacing must exceed r");
}

bool is_discrete(const EmbeddingSpec& e) { return e.target.kind == Metric::Kind::kDiscrete; }

Atom embed_atom(const EmbeddingSpec& e, const Atom& a) {
  if (a.point_kind() != Point::Kind::kAtom) throw FixtureError("source supports must use atom points");
  if (is_discrete(e)) return a;
  switch (a.kind()) {
    case Atom::Kind::kFinite: {
      std::vector<Point> pts;
      for (const auto& p : a.points()) pts.push_back(embed_point(e, Int(static_cast<long>(p.atom_id()))));
      return Atom::finite(std::move(pts));
    }
    case Atom::Kind::kLattice:
      return Atom::lattice(Point::Kind::kReal, e.spacing * a.a(), e.spacing * a.m());
    case Atom::Kind::kIntSet:
      return Atom::int_set(Point::Kind::kReal, IndexSet::affine(e.spacing, 0, a.indices()));
    case Atom::Kind::kBasis:
      break;
  }
  throw FixtureError("source supports must use atom points");
}

}  // namespace

Point embed_point(const EmbeddingSpec& e, const Int& j) {
  check_spec(e);
  if (is_discrete(e)) {
    if (!j.fits_slong_p()) throw FixtureError("atom index out of range");
    return Point::atom(j.get_si());
  }
  return Point::real(Rat(e.spacing * j));
}

std::optional<Int> embed_index(const EmbeddingSpec& e, const Point& x) {
  check_spec(e);
  if (is_discrete(e)) {
    if (x.kind() != Point::Kind::kAtom) return std::nullopt;
    return Int(static_cast<long>(x.atom_id()));
  }
  if (x.kind() != Point::Kind::kReal || x.real_value().get_den() != 1) return std::nullopt;
  Int v = x.real_value().get_num();
  if (v % e.spacing != 0) return std::nullopt;
  return Int(v / e.spacing);
}

ExplicitClass embed_countable_class(const std::string& name, const std::vector<Hypothesis>& source,
                                    const EmbeddingSpec& e) {
  check_spec(e);
  std::vector<Hypothesis> out;
  for (const auto& h : source) {
    auto fin = h.support.is_finite();
    if (!fin.has_value() || *fin) {
      throw PreconditionError("embedding needs infinite supports: " + h.id);
    }
    std::vector<Atom> atoms;
    for (const auto& a : h.support.atoms()) atoms.push_back(embed_atom(e, a));
    out.push_back(Hypothesis{h.id, Support(std::move(atoms))});
  }
  return ExplicitClass(name, e.target, std::move(out));
}

}  // namespace genlab
