#include "ramseylab/ramsey.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace ramseylab {

namespace {

void charge(Fuel& fuel, std::uint64_t n = 1) {
  if (!fuel.take(n)) throw FuelExhaustedError("extraction fuel spent");
}

// Base coloring on fixed (kept sorted) plus one candidate.
int side_color(const Space& space, const Coloring& coloring,
               const std::vector<Point>& fixed_sorted, const Point& z) {
  std::vector<Point> edge;
  edge.reserve(fixed_sorted.size() + 1);
  auto it = std::upper_bound(fixed_sorted.begin(), fixed_sorted.end(), z,
                             point_less);
  edge.assign(fixed_sorted.begin(), it);
  edge.push_back(z);
  edge.insert(edge.end(), it, fixed_sorted.end());
  return coloring.value_sorted(space, edge);
}

struct Decision {
  int color = 1;
  bool thin = false;
};

// Most frequent color, ties to the least. Evidence below the number of
// colors counts as thin.
Decision decide(const std::vector<int>& samples, int colors) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(colors) + 1, 0);
  for (int c : samples) counts[static_cast<std::size_t>(c)] += 1;
  Decision d;
  d.color = 1;
  for (int c = 2; c <= colors; ++c) {
    if (counts[static_cast<std::size_t>(c)] >
        counts[static_cast<std::size_t>(d.color)]) {
      d.color = c;
    }
  }
  d.thin = samples.size() < static_cast<std::size_t>(colors);
  return d;
}

class MonoNode;
using NodePtr = std::shared_ptr<MonoNode>;

// Where a node reads candidates: the class enumeration itself, or the
// emissions of the sibling built one pivot earlier. Reading through a node
// pointer with an index offset instead of stacking wrapped streams keeps a
// long sibling chain from deepening the call stack per pivot.
struct NodeSource {
  std::optional<PointStream> stream;
  NodePtr node;
  std::uint64_t skip = 0;

  NodeSource shifted(std::uint64_t by) const {
    NodeSource s = *this;
    s.skip += by;
    return s;
  }
  std::optional<Point> at(std::uint64_t i, Fuel& fuel) const;
};

// One level of the pivot recursion. With one free slot left it is a plain
// pigeonhole filter; otherwise it draws pivots, hands each pivot to a child
// level that thins the remainder, and emits the pivots whose recorded color
// matches its own pigeonhole decision over the first `width` records.
class MonoNode {
 public:
  MonoNode(const Space& space, const Coloring& coloring, bool* thin_flag,
           std::vector<Point> fixed_sorted, NodeSource source,
           std::uint64_t width, std::uint64_t pivot_cap)
      : space_(space),
        coloring_(&coloring),
        thin_flag_(thin_flag),
        fixed_(std::move(fixed_sorted)),
        source_(std::move(source)),
        width_(std::max<std::uint64_t>(width, 1)),
        cap_(pivot_cap) {}

  std::optional<Point> emission_at(std::uint64_t i, Fuel& fuel) {
    if (arity() == 1) return unary_at(i, fuel);
    return chain_at(i, fuel);
  }

  std::optional<int> color() const { return decided_; }
  bool capped() const { return capped_; }

 private:
  std::size_t arity() const {
    return static_cast<std::size_t>(coloring_->dimension()) - fixed_.size();
  }

  std::uint64_t child_width() const {
    std::uint64_t floor_width =
        std::max<std::uint64_t>(4, static_cast<std::uint64_t>(coloring_->colors()));
    return std::max(width_ / 2, floor_width);
  }

  std::optional<Point> unary_at(std::uint64_t i, Fuel& fuel) {
    if (!decided_) {
      std::vector<int> seen;
      for (std::uint64_t s = 0; s < width_; ++s) {
        auto z = source_.at(s, fuel);
        if (!z) break;
        charge(fuel);
        seen.push_back(side_color(space_, *coloring_, fixed_, *z));
      }
      Decision d = decide(seen, coloring_->colors());
      decided_ = d.color;
      if (d.thin && thin_flag_ != nullptr) *thin_flag_ = true;
    }
    while (emitted_.size() <= i) {
      auto z = source_.at(cursor_, fuel);
      if (!z) return std::nullopt;
      ++cursor_;
      charge(fuel);
      if (side_color(space_, *coloring_, fixed_, *z) == *decided_) {
        emitted_.push_back(*z);
      }
    }
    return emitted_[i];
  }

  std::optional<Point> chain_at(std::uint64_t i, Fuel& fuel) {
    ensure_decided(fuel);
    if (!decided_) return std::nullopt;
    for (;;) {
      // A pivot's record closes when the next pivot is drawn, so the newest
      // pivot stays pending.
      while (scan_ + 1 < pivots_.size()) {
        if (pivot_colors_[scan_] == *decided_) survivors_.push_back(pivots_[scan_]);
        ++scan_;
      }
      if (survivors_.size() > i) return survivors_[i];
      if (!step(fuel)) return std::nullopt;
    }
  }

  void ensure_decided(Fuel& fuel) {
    if (decided_) return;
    while (pivot_colors_.size() < width_) {
      if (!step(fuel)) break;  // gathering cap; fuel death throws inside step
    }
    if (pivot_colors_.empty()) return;
    std::size_t head = std::min<std::size_t>(width_, pivot_colors_.size());
    std::vector<int> sample(pivot_colors_.begin(),
                            pivot_colors_.begin() + static_cast<std::ptrdiff_t>(head));
    Decision d = decide(sample, coloring_->colors());
    decided_ = d.color;
    if (d.thin && thin_flag_ != nullptr) *thin_flag_ = true;
  }

  bool step(Fuel& fuel) {
    if (cap_ != 0 && pivots_.size() >= cap_) {
      capped_ = true;
      return false;
    }
    // The next pivot is the first element the newest child lets through;
    // that child's remainder, shifted past the pivot, feeds the next one.
    NodeSource src = pivots_.empty()
                         ? source_
                         : NodeSource{std::nullopt, children_.back(), 0};
    auto y = src.at(0, fuel);
    if (!y) {
      capped_ = true;  // upstream ended under its own bound
      return false;
    }
    if (!children_.empty()) {
      // drawing from the newest child forced its decision, which is the
      // pivot color of the pivot that created it
      pivot_colors_.push_back(children_.back()->color().value_or(0));
    }
    pivots_.push_back(*y);
    std::vector<Point> fixed = fixed_;
    fixed.insert(std::upper_bound(fixed.begin(), fixed.end(), *y, point_less),
                 *y);
    std::uint64_t cw = child_width();
    auto child = std::make_shared<MonoNode>(space_, *coloring_, thin_flag_,
                                            std::move(fixed), src.shifted(1),
                                            cw, 8 * cw + 64);
    children_.push_back(std::move(child));
    return true;
  }

  Space space_;
  const Coloring* coloring_;
  bool* thin_flag_;
  std::vector<Point> fixed_;
  NodeSource source_;
  std::uint64_t width_;
  std::uint64_t cap_;
  std::uint64_t cursor_ = 0;
  std::vector<Point> emitted_;
  std::vector<Point> pivots_;
  std::vector<int> pivot_colors_;
  std::vector<NodePtr> children_;
  std::optional<int> decided_;
  std::vector<Point> survivors_;
  std::size_t scan_ = 0;
  bool capped_ = false;
};

std::optional<Point> NodeSource::at(std::uint64_t i, Fuel& fuel) const {
  if (node) return node->emission_at(skip + i, fuel);
  auto p = stream->at(skip + i, fuel);
  // Plain streams signal fuel death by ending; nodes throw instead.
  if (!p && fuel.exhausted()) throw FuelExhaustedError("extraction fuel spent");
  return p;
}

}  // namespace

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::fuel_exhausted: return "fuel-exhausted";
    case RunStatus::error: return "error";
  }
  return "unknown";
}

Json MonoCertificate::to_json() const {
  Json j;
  Json pts = Json::array();
  for (const auto& p : points) pts.push_back(point_literal(p));
  j["points"] = std::move(pts);
  j["color"] = color;
  j["coloring"] = coloring_spec;
  j["target"] = target;
  j["horizon"] = horizon;
  j["verified"] = verified;
  j["engine"] = engine_version;
  return j;
}

MonoCertificate MonoCertificate::from_json(const Json& j) {
  MonoCertificate cert;
  for (const auto& lit : j.at("points")) {
    cert.points.push_back(parse_point(lit.get<std::string>()));
  }
  cert.color = j.at("color").get<int>();
  cert.coloring_spec = j.at("coloring");
  cert.target = j.at("target").get<std::uint64_t>();
  cert.horizon = j.at("horizon").get<std::uint64_t>();
  cert.verified = j.at("verified").get<bool>();
  cert.engine_version = j.at("engine").get<std::string>();
  return cert;
}

ExtractionOutcome extract_monochromatic(const Space& space,
                                        const Coloring& coloring,
                                        const Point& anchor,
                                        const ExtractionParams& params,
                                        std::uint64_t fuel) {
  space.require(anchor);
  if (params.horizon == 0) {
    throw std::invalid_argument("extraction horizon must be positive");
  }
  if (params.target < static_cast<std::uint64_t>(coloring.dimension())) {
    throw std::invalid_argument("extraction target below coloring dimension");
  }

  ExtractionOutcome out;
  out.certificate.coloring_spec = coloring.spec();
  out.certificate.target = params.target;
  out.certificate.horizon = params.horizon;

  Fuel budget(fuel);
  bool thin = false;
  auto top = std::make_shared<MonoNode>(
      space, coloring, &thin, std::vector<Point>{},
      NodeSource{space.omega_enumerate(anchor), nullptr, 0}, params.horizon,
      params.target + params.horizon);
  try {
    for (std::uint64_t t = 0; t < params.target; ++t) {
      auto p = top->emission_at(t, budget);
      if (!p) {
        out.status = top->capped() && !budget.exhausted()
                         ? RunStatus::ok
                         : RunStatus::fuel_exhausted;
        if (out.status == RunStatus::ok) {
          out.note = "pivot gathering cap reached before target size";
        }
        break;
      }
      out.certificate.points.push_back(*p);
    }
  } catch (const FuelExhaustedError&) {
    out.status = RunStatus::fuel_exhausted;
  }
  if (out.status == RunStatus::fuel_exhausted && out.note.empty()) {
    out.note = "fuel exhausted";
  }
  out.certificate.color = top->color().value_or(0);
  out.certificate.verified = verify_certificate(space, coloring, out.certificate);
  out.thin_evidence = thin;
  out.fuel_used = budget.used();
  return out;
}

bool verify_certificate(const Space& space, const Coloring& coloring,
                        const MonoCertificate& cert) {
  const auto& pts = cert.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] == pts[j]) return false;
      if (!space.related(pts[i], pts[j])) return false;
    }
  }
  std::size_t n = static_cast<std::size_t>(coloring.dimension());
  if (pts.size() < n) return true;
  if (cert.color < 1 || cert.color > coloring.colors()) return false;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Point> edge(n);
  for (;;) {
    for (std::size_t t = 0; t < n; ++t) edge[t] = pts[idx[t]];
    if (coloring.value(space, edge) != cert.color) return false;
    // next combination
    std::size_t t = n;
    while (t > 0) {
      --t;
      if (idx[t] + (n - t) < pts.size()) {
        ++idx[t];
        for (std::size_t u = t + 1; u < n; ++u) idx[u] = idx[u - 1] + 1;
        break;
      }
      if (t == 0) return true;
    }
  }
}

PigeonholeResult pigeonhole_filter(const Space& space, const Coloring& unary,
                                   PointStream stream, std::uint64_t horizon,
                                   Fuel& fuel) {
  if (unary.dimension() != 1) {
    throw std::invalid_argument("pigeonhole filter needs a coloring of dimension 1");
  }
  std::vector<int> seen;
  for (std::uint64_t s = 0; s < horizon; ++s) {
    auto p = stream.at(s, fuel);
    if (!p) break;
    charge(fuel);
    std::vector<Point> one{*p};
    seen.push_back(unary.value(space, one));
  }
  Decision d = decide(seen, unary.colors());
  PigeonholeResult out{
      d.color,
      stream.filter([space, unary, want = d.color](const Point& p, Fuel& f) {
        charge(f);
        std::vector<Point> one{p};
        return unary.value(space, one) == want;
      }),
      d.thin, seen.size()};
  return out;
}

struct MonochromaticStream::Impl {
  Coloring coloring;
  Fuel fuel;
  bool thin = false;
  bool dead = false;
  std::uint64_t pos = 0;
  NodePtr top;
};

MonochromaticStream::MonochromaticStream(const Space& space,
                                         const Coloring& coloring,
                                         const Point& anchor,
                                         std::uint64_t horizon,
                                         std::uint64_t fuel)
    : impl_(new Impl{coloring, Fuel(fuel), false, false, 0, nullptr}) {
  space.require(anchor);
  if (horizon == 0) {
    throw std::invalid_argument("extraction horizon must be positive");
  }
  impl_->top = std::make_shared<MonoNode>(
      space, impl_->coloring, &impl_->thin, std::vector<Point>{},
      NodeSource{space.omega_enumerate(anchor), nullptr, 0}, horizon, 0);
}

MonochromaticStream::~MonochromaticStream() = default;
MonochromaticStream::MonochromaticStream(MonochromaticStream&&) noexcept = default;

std::optional<Point> MonochromaticStream::next() {
  if (impl_->dead) return std::nullopt;
  try {
    auto p = impl_->top->emission_at(impl_->pos, impl_->fuel);
    if (!p) {
      impl_->dead = true;
      return std::nullopt;
    }
    ++impl_->pos;
    return p;
  } catch (const FuelExhaustedError&) {
    impl_->dead = true;
    return std::nullopt;
  }
}

std::optional<int> MonochromaticStream::color() const {
  return impl_->top->color();
}

bool MonochromaticStream::thin_evidence() const { return impl_->thin; }
bool MonochromaticStream::exhausted() const { return impl_->dead; }
std::uint64_t MonochromaticStream::fuel_used() const { return impl_->fuel.used(); }

ExtractionOutcome push_section(const Space& space, const Section& section,
                               const Coloring& coloring, const Point& anchor,
                               const ExtractionParams& params,
                               std::uint64_t fuel, std::uint64_t retract_fuel) {
  Coloring extended = Coloring::extend(coloring, section, retract_fuel);
  ExtractionOutcome out =
      extract_monochromatic(space, extended, anchor, params, fuel);
  std::vector<Point> mapped;
  mapped.reserve(out.certificate.points.size());
  for (const auto& p : out.certificate.points) {
    Fuel rf(retract_fuel);
    auto r = retract(space, section, p, rf);
    if (!r) {
      out.status = RunStatus::fuel_exhausted;
      out.note = "retraction ran out of fuel for a certificate point";
      out.certificate.verified = false;
      return out;
    }
    mapped.push_back(*r);
  }
  std::vector<Point> dedup = mapped;
  std::sort(dedup.begin(), dedup.end(), point_less);
  if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end()) {
    out.status = RunStatus::error;
    out.note = "retraction collided on certificate points";
    out.certificate.verified = false;
    return out;
  }
  out.certificate.points = std::move(mapped);
  out.certificate.coloring_spec = coloring.spec();
  out.certificate.verified = verify_certificate(space, coloring, out.certificate);
  return out;
}

}  // namespace ramseylab
