#include "genlab/point.hpp"

#include <algorithm>
#include <set>

namespace genlab {

Point Point::basis(const Int& k, const QS2& scale) {
  if (scale.is_zero()) return origin();
  SparseVec v;
  v.coords.emplace_back(k, scale);
  return Point(std::move(v));
}

Point Point::vec(std::vector<std::pair<Int, QS2>> coords) {
  std::sort(coords.begin(), coords.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  SparseVec v;
  for (auto& [idx, c] : coords) {
    if (idx <= 0) throw ParseError("vector index must be positive");
    if (!v.coords.empty() && v.coords.back().first == idx) {
      throw ParseError("duplicate vector index " + idx.get_str());
    }
    if (!c.is_zero()) v.coords.emplace_back(idx, std::move(c));
  }
  return Point(std::move(v));
}

bool Point::is_axis_point() const {
  return kind() == Kind::kVec && vec_value().coords.size() == 1;
}

namespace {

int cmp_rat(const Rat& x, const Rat& y) { return cmp(x, y) < 0 ? -1 : (cmp(x, y) > 0 ? 1 : 0); }

int cmp_qs2_struct(const QS2& x, const QS2& y) {
  int c = cmp_rat(x.a, y.a);
  return c != 0 ? c : cmp_rat(x.b, y.b);
}

int cmp_coords(const SparseVec& x, const SparseVec& y, bool by_value) {
  size_t n = std::min(x.coords.size(), y.coords.size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp(x.coords[i].first, y.coords[i].first);
    if (c != 0) return c < 0 ? -1 : 1;
    c = by_value ? compare(x.coords[i].second, y.coords[i].second)
                 : cmp_qs2_struct(x.coords[i].second, y.coords[i].second);
    if (c != 0) return c;
  }
  if (x.coords.size() == y.coords.size()) return 0;
  return x.coords.size() < y.coords.size() ? -1 : 1;
}

}  // namespace

bool PointLess::operator()(const Point& p, const Point& q) const {
  if (p.kind() != q.kind()) return p.kind() < q.kind();
  switch (p.kind()) {
    case Point::Kind::kAtom:
      return p.atom_id() < q.atom_id();
    case Point::Kind::kReal:
      return p.real_value() < q.real_value();
    case Point::Kind::kVec:
      return cmp_coords(p.vec_value(), q.vec_value(), false) < 0;
  }
  return false;
}

bool canonical_less(const Point& p, const Point& q) {
  if (p.kind() != q.kind()) return p.kind() < q.kind();
  switch (p.kind()) {
    case Point::Kind::kAtom: {
      auto ap = p.atom_id() < 0 ? -p.atom_id() : p.atom_id();
      auto aq = q.atom_id() < 0 ? -q.atom_id() : q.atom_id();
      if (ap != aq) return ap < aq;
      return p.atom_id() > q.atom_id();
    }
    case Point::Kind::kReal: {
      Rat ap = abs(p.real_value());
      Rat aq = abs(q.real_value());
      if (ap != aq) return ap < aq;
      return sgn(p.real_value()) > sgn(q.real_value());
    }
    case Point::Kind::kVec: {
      const auto& x = p.vec_value().coords;
      const auto& y = q.vec_value().coords;
      if (x.empty() || y.empty()) return x.empty() && !y.empty();
      if (x.back().first != y.back().first) return x.back().first < y.back().first;
      return cmp_coords(p.vec_value(), q.vec_value(), true) < 0;
    }
  }
  return false;
}

std::string format_point(const Point& p) {
  switch (p.kind()) {
    case Point::Kind::kAtom:
      return "atom:" + std::to_string(p.atom_id());
    case Point::Kind::kReal:
      return "real:" + format_rat(p.real_value());
    case Point::Kind::kVec: {
      std::string out = "svec:";
      bool first = true;
      for (const auto& [idx, c] : p.vec_value().coords) {
        if (!first) out += ",";
        first = false;
        out += idx.get_str() + "=" + format_qs2(c);
      }
      return out;
    }
  }
  return "";
}

Point parse_point(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("point needs a kind prefix: '" + std::string(text) + "'");
  }
  std::string_view kind = text.substr(0, colon);
  std::string_view body = text.substr(colon + 1);
  if (kind == "atom") {
    Int id = parse_int(body);
    if (!id.fits_slong_p()) throw ParseError("atom id out of range");
    return Point::atom(id.get_si());
  }
  if (kind == "real") return Point::real(parse_rat(body));
  if (kind == "svec") {
    std::vector<std::pair<Int, QS2>> coords;
    size_t pos = 0;
    while (pos < body.size()) {
      size_t comma = body.find(',', pos);
      std::string_view item =
          body.substr(pos, comma == std::string_view::npos ? body.size() - pos : comma - pos);
      auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("svec entry needs '=': '" + std::string(item) + "'");
      }
      coords.emplace_back(parse_int(item.substr(0, eq)), parse_qs2(item.substr(eq + 1)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return Point::vec(std::move(coords));
  }
  throw ParseError("unknown point kind '" + std::string(kind) + "'");
}

std::string format_points(const std::vector<Point>& pts) {
  std::string out = "[";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) out += " ";
    out += format_point(pts[i]);
  }
  return out + "]";
}

std::vector<Point> dedup_points(const std::vector<Point>& pts) {
  std::set<Point, PointLess> seen;
  std::vector<Point> out;
  for (const auto& p : pts) {
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

}  // namespace genlab
