#include "genlab/players.hpp"

#include <algorithm>

namespace genlab {

std::string format_move(const Move& m) {
  if (m.is_emit()) return "emit:" + format_point(m.point);
  return m.note.empty() ? "abstain" : "abstain:" + m.note;
}

Move parse_move(std::string_view text) {
  if (text.rfind("emit:", 0) == 0) return Move::emit(parse_point(text.substr(5)));
  if (text == "abstain") return Move::abstain();
  if (text.rfind("abstain:", 0) == 0) return Move::abstain(std::string(text.substr(8)));
  throw ParseError("bad move '" + std::string(text) + "'");
}

std::size_t SeenCover::update(const Sample& seen) {
  if (seen.size() < consumed_) throw std::logic_error("reveal history shrank");
  for (; consumed_ < seen.size(); ++consumed_) tracker_.add(seen[consumed_]);
  return tracker_.value();
}

const BallIndex& SeenBall::update(const Sample& seen) {
  if (seen.size() < consumed_) throw std::logic_error("reveal history shrank");
  for (; consumed_ < seen.size(); ++consumed_) index_.add(seen[consumed_]);
  return index_;
}

namespace {

// First point of `closure` outside the ball, scanning at most `budget` points.
Move first_novel(const Support& closure, const BallIndex& ball, std::size_t budget) {
  auto cur = closure.cursor(budget);
  for (std::size_t i = 0; i < budget; ++i) {
    auto p = cur.next();
    if (!p) break;
    if (!ball.covers(*p)) return Move::emit(std::move(*p));
  }
  return Move::abstain("budget");
}

}  // namespace

UniformGenerator::UniformGenerator(std::shared_ptr<const HypothesisClass> cls, Rat eps,
                                   Rat eps_prime, std::size_t d_star, std::size_t budget)
    : cls_(std::move(cls)),
      d_star_(d_star),
      budget_(budget),
      cover_(cls_->metric(), std::move(eps)),
      ball_(cls_->metric(), std::move(eps_prime)) {}

std::string UniformGenerator::name() const { return "uniform d_star=" + std::to_string(d_star_); }

Move UniformGenerator::step(const Sample& seen) {
  std::size_t d = cover_.update(seen);
  const BallIndex& ball = ball_.update(seen);
  if (d < d_star_) return Move::abstain("threshold");
  auto cl = cls_->closure(seen);
  if (!cl) return Move::abstain("bot");
  return first_novel(*cl, ball, budget_);
}

NonUniformGenerator::NonUniformGenerator(std::vector<std::shared_ptr<const HypothesisClass>> ladder,
                                         std::vector<std::size_t> thresholds, Rat eps,
                                         Rat eps_prime, std::size_t budget)
    : ladder_(std::move(ladder)),
      thresholds_(std::move(thresholds)),
      budget_(budget),
      cover_(ladder_.at(0)->metric(), std::move(eps)),
      ball_(ladder_.at(0)->metric(), std::move(eps_prime)) {
  if (ladder_.size() != thresholds_.size()) {
    throw std::invalid_argument("ladder and thresholds differ in length");
  }
}

Move NonUniformGenerator::step(const Sample& seen) {
  std::size_t d = cover_.update(seen);
  const BallIndex& ball = ball_.update(seen);
  std::size_t top = std::min(seen.size(), ladder_.size());
  last_level_ = 0;
  for (std::size_t n = top; n >= 1; --n) {
    if (thresholds_[n - 1] <= d) {
      last_level_ = n;
      break;
    }
  }
  if (last_level_ == 0) return Move::abstain("threshold");
  auto cl = ladder_[last_level_ - 1]->closure(seen);
  if (!cl) return Move::abstain("bot");
  return first_novel(*cl, ball, budget_);
}

std::vector<std::size_t> ladder_thresholds(
    const std::vector<std::shared_ptr<const ExplicitClass>>& ladder, const Rat& eps,
    const Rat& eps_prime) {
  std::vector<std::size_t> out;
  for (const auto& h : ladder) {
    auto d = closure_dimension_finite(*h, eps, eps_prime);
    if (d.kind != DimResult::Kind::kFinite) {
      throw PreconditionError("ladder level " + h->name() + " has infinite closure dimension");
    }
    out.push_back(d.d + 1);
  }
  return out;
}

LimitGenerator::LimitGenerator(std::vector<std::shared_ptr<const HypothesisClass>> classes,
                               Rat eps, Rat eps_prime, std::size_t c, std::size_t budget)
    : classes_(std::move(classes)),
      eps_(eps),
      c_(c),
      budget_(budget),
      cover_(classes_.at(0)->metric(), eps),
      near_(classes_.at(0)->metric(), eps),
      novel_(classes_.at(0)->metric(), std::move(eps_prime)) {}

std::size_t LimitGenerator::counter(std::size_t i) const {
  for (const auto& e : enums_)
    if (e.index == i) return e.count;
  return 0;
}

const Point* LimitGenerator::fetch(Enum& e, std::size_t j) {
  while (e.cache.size() <= j && !e.exhausted) {
    if (e.cache.size() >= budget_) {
      e.exhausted = true;
      break;
    }
    auto p = e.cursor.next();
    if (!p) e.exhausted = true;
    else e.cache.push_back(std::move(*p));
  }
  return j < e.cache.size() ? &e.cache[j] : nullptr;
}

Move LimitGenerator::step(const Sample& seen) {
  std::size_t d = cover_.update(seen);
  const BallIndex& near = near_.update(seen);
  const BallIndex& novel = novel_.update(seen);
  if (!t_star_) {
    if (d < c_ + 1) return Move::abstain("threshold");
    t_star_ = seen.size();
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      auto cl = classes_[i]->closure(seen);
      if (!cl) continue;
      survivors_.push_back(i);
      enums_.push_back(Enum{i, cl->cursor(budget_), {}, false, 0});
    }
  }
  if (enums_.empty()) return Move::abstain("bot");
  Enum* best = nullptr;
  for (auto& e : enums_) {
    while (const Point* p = fetch(e, e.count)) {
      if (!near.covers(*p)) break;
      ++e.count;
    }
    if (!best || e.count > best->count) best = &e;
  }
  chosen_ = best->index;
  for (std::size_t j = 0; j < budget_; ++j) {
    const Point* p = fetch(*best, j);
    if (!p) break;
    if (!novel.covers(*p)) return Move::emit(*p);
  }
  return Move::abstain("budget");
}

ErmSearchGenerator::ErmSearchGenerator(std::shared_ptr<const HypothesisClass> cls, Rat eps,
                                       Rat eps_prime, Support dense, std::size_t budget,
                                       std::size_t d_star)
    : cls_(std::move(cls)),
      dense_(std::move(dense)),
      budget_(budget),
      d_star_(d_star),
      cover_(cls_->metric(), std::move(eps)),
      ball_(cls_->metric(), std::move(eps_prime)) {}

Move ErmSearchGenerator::step(const Sample& seen) {
  std::size_t d = cover_.update(seen);
  const BallIndex& ball = ball_.update(seen);
  if (d < d_star_) return Move::abstain("threshold");
  LabeledSample s;
  for (const auto& x : seen) s.push_back({x, true});
  s.push_back({Point(), false});
  auto cur = dense_.cursor(budget_);
  for (std::size_t i = 0; i < budget_; ++i) {
    auto y = cur.next();
    if (!y) break;
    if (ball.covers(*y)) continue;
    s.back().point = *y;
    ++erm_calls_;
    if (cls_->erm(s) >= 1) return Move::emit(std::move(*y));
  }
  return Move::abstain("budget");
}

EnumerationAdversary::EnumerationAdversary(Support support, std::uint64_t seed, std::size_t block,
                                           Sample prefix, std::size_t budget)
    : support_(std::move(support)),
      rng_(seed),
      block_(std::max<std::size_t>(block, 1)),
      budget_(budget),
      prefix_(std::move(prefix)) {}

void EnumerationAdversary::refill() {
  pending_.clear();
  pending_pos_ = 0;
  for (int attempt = 0; attempt < 2 && pending_.empty(); ++attempt) {
    if (!cursor_) cursor_.emplace(support_.cursor(budget_));
    while (pending_.size() < block_) {
      auto p = cursor_->next();
      if (!p) {
        cursor_.reset();
        break;
      }
      pending_.push_back(std::move(*p));
    }
  }
  if (pending_.empty()) throw BaseExhausted("enumeration adversary has an empty support");
  std::shuffle(pending_.begin(), pending_.end(), rng_);
}

Point EnumerationAdversary::reveal(std::size_t, const Sample&, const std::vector<Move>&) {
  if (prefix_pos_ < prefix_.size()) return prefix_[prefix_pos_++];
  if (pending_pos_ >= pending_.size()) refill();
  return pending_[pending_pos_++];
}

Point ScriptedAdversary::reveal(std::size_t t, const Sample&, const std::vector<Move>&) {
  if (script_.empty()) throw BaseExhausted("empty script");
  return script_[std::min(t, script_.size()) - 1];
}

TrapAdversary::TrapAdversary(Metric m, std::function<Point(std::size_t)> base,
                             std::size_t prefix_m, Rat eps_prime, std::size_t budget)
    : metric_(m),
      base_(std::move(base)),
      m_(prefix_m),
      budget_(budget),
      picked_ball_(m, eps_prime),
      output_ball_(m, eps_prime) {}

Point TrapAdversary::reveal(std::size_t t, const Sample&, const std::vector<Move>& moves) {
  for (; moves_seen_ < moves.size(); ++moves_seen_) {
    if (moves[moves_seen_].is_emit()) output_ball_.add(moves[moves_seen_].point);
  }
  if (t <= m_) {
    Point p = base_(t);
    picks_.push_back(t);
    picked_ball_.add(p);
    return p;
  }
  std::size_t start = picks_.empty() ? 1 : picks_.back() + 1;
  for (std::size_t i = start; i < start + budget_; ++i) {
    Point p = base_(i);
    if (picked_ball_.covers(p) || output_ball_.covers(p)) continue;
    picks_.push_back(i);
    picked_ball_.add(p);
    return p;
  }
  throw BaseExhausted("trap base sequence exhausted after index " + std::to_string(start));
}

StagedTrapAdversary::StagedTrapAdversary(StagedRows rows, std::size_t stage_budget)
    : rows_(std::move(rows)), budget_(stage_budget) {}

Point StagedTrapAdversary::reveal(std::size_t, const Sample&, const std::vector<Move>& moves) {
  if (anchor_pos_ < rows_.anchors.size()) return rows_.anchors[anchor_pos_++];
  if (j_ > 0 && !moves.empty() && moves.back().is_emit() &&
      rows_.in_protected(stage_, moves.back().point)) {
    ++stage_;
    j_ = 0;
  }
  if (j_ == 0) {
    j_ = 1;
    return rows_.stage_head(stage_);
  }
  if (j_ > budget_) stalled_ = true;
  return rows_.row(stage_, j_++);
}

}  // namespace genlab
