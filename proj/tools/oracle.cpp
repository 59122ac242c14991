#include "oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace oracle {

namespace {

using OJson = nlohmann::json;

[[noreturn]] void bail(const std::string& msg) { throw std::runtime_error(msg); }

struct Pt {
  bool product = false;
  std::string prefix;
  std::string period;
  std::string cls;
  std::uint64_t index = 0;
};

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

void check_bits(const std::string& s) {
  for (char c : s) {
    if (c != '0' && c != '1') bail("literal has a digit outside 0/1");
  }
}

Pt parse_pt(const std::string& lit) {
  Pt p;
  auto colon = lit.rfind(':');
  if (colon != std::string::npos && colon > 0 &&
      all_digits(lit.substr(colon + 1))) {
    p.product = true;
    p.cls = lit.substr(0, colon);
    p.index = std::stoull(lit.substr(colon + 1));
    return p;
  }
  auto bar = lit.find('|');
  if (bar == std::string::npos) bail("literal lacks a period part: " + lit);
  std::string prefix = lit.substr(0, bar);
  std::string period = lit.substr(bar + 1);
  if (prefix == "e") {
    prefix.clear();
  } else if (prefix.empty()) {
    bail("empty prefix must be written e: " + lit);
  }
  if (period.empty()) bail("empty period: " + lit);
  check_bits(prefix);
  check_bits(period);
  p.prefix = std::move(prefix);
  p.period = std::move(period);
  return p;
}

int digit(const Pt& p, std::size_t n) {
  if (n < p.prefix.size()) return p.prefix[n] - '0';
  return p.period[(n - p.prefix.size()) % p.period.size()] - '0';
}

std::size_t pair_horizon(const Pt& x, const Pt& y) {
  std::size_t n = std::max(x.prefix.size(), y.prefix.size());
  return n + std::lcm(x.period.size(), y.period.size());
}

bool related(const Pt& x, const Pt& y) {
  if (x.product != y.product) bail("mixed backends in one set");
  if (x.product) return x.cls == y.cls;
  std::size_t n = std::max(x.prefix.size(), y.prefix.size());
  for (std::size_t i = n; i < pair_horizon(x, y); ++i) {
    if (digit(x, i) != digit(y, i)) return false;
  }
  return true;
}

bool sem_equal(const Pt& x, const Pt& y) {
  if (x.product != y.product) return false;
  if (x.product) return x.cls == y.cls && x.index == y.index;
  if (!related(x, y)) return false;
  std::size_t n = std::max(x.prefix.size(), y.prefix.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (digit(x, i) != digit(y, i)) return false;
  }
  return true;
}

// first index from which the expansions agree forever (related pairs only)
std::size_t agree_from(const Pt& x, const Pt& y) {
  std::size_t n = std::max(x.prefix.size(), y.prefix.size());
  std::size_t d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (digit(x, i) != digit(y, i)) d = i + 1;
  }
  return d;
}

int parity_value(const Pt& x, const Pt& y) {
  if (x.product || y.product) bail("parity needs sequence points");
  if (!related(x, y)) bail("parity on unrelated points");
  std::size_t d = agree_from(x, y);
  if (d == 0) bail("parity on equal points");
  int sum = 0;
  for (std::size_t i = 0; i < d; ++i) sum += digit(x, i) + digit(y, i);
  return sum % 2 == 0 ? 1 : 2;
}

using Wide = __int128;

// y minus x as an exact integer; expansions longer than 120 digits are out
// of this checker's range
Wide int_diff(const Pt& x, const Pt& y) {
  std::size_t n = std::max(x.prefix.size(), y.prefix.size());
  if (n > 120) bail("expansion too long for the integer recheck");
  Wide total = 0;
  Wide power = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total += power * (digit(y, i) - digit(x, i));
    power *= 2;
  }
  return total;
}

long long zeta_pos(std::uint64_t index) {
  if (index % 2 == 0) return static_cast<long long>(index / 2);
  return -static_cast<long long>(index / 2) - 1;
}

// strict zeta order: does x sit below y
bool zeta_below(const Pt& x, const Pt& y) {
  if (x.product != y.product) bail("mixed backends in one set");
  if (x.product) {
    if (x.cls != y.cls) bail("zeta order across classes");
    return zeta_pos(x.index) < zeta_pos(y.index);
  }
  if (!related(x, y)) bail("zeta order across classes");
  return int_diff(x, y) > 0;
}

int adjacency_value(const Pt& x, const Pt& y) {
  if (x.product != y.product) bail("mixed backends in one set");
  if (x.product) {
    if (x.cls != y.cls) bail("adjacency on unrelated points");
    long long a = zeta_pos(x.index);
    long long b = zeta_pos(y.index);
    return (a - b == 1 || b - a == 1) ? 1 : 2;
  }
  if (!related(x, y)) bail("adjacency on unrelated points");
  Wide d = int_diff(x, y);
  return (d == 1 || d == -1) ? 1 : 2;
}

std::uint64_t splitmix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ull;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
  return v ^ (v >> 31);
}

std::uint64_t separation(const Pt& x, const Pt& y) {
  if (x.product) {
    std::uint64_t d = x.index > y.index ? x.index - y.index : y.index - x.index;
    return std::min<std::uint64_t>(d, 4);
  }
  return std::min<std::uint64_t>(agree_from(x, y), 4);
}

bool canon_less(const Pt& a, const Pt& b) {
  if (a.product) return a.index < b.index;
  for (std::size_t i = 0; i < pair_horizon(a, b); ++i) {
    int da = digit(a, i);
    int db = digit(b, i);
    if (da != db) return da < db;
  }
  return false;
}

int spec_dimension(const OJson& spec) {
  std::string kind = spec.at("kind").get<std::string>();
  if (kind == "parity" || kind == "adjacency") return 2;
  if (kind == "constant" || kind == "random" || kind == "lift") {
    return spec.at("dimension").get<int>();
  }
  if (kind == "fix") return spec_dimension(spec.at("base")) - 1;
  if (kind == "extend") return spec_dimension(spec.at("base"));
  bail("unknown coloring kind: " + kind);
}

bool in_section(const std::string& name, const Pt& p) {
  if (name == "all") return true;
  if (name == "none") return false;
  auto open = name.find('[');
  auto close = name.find("]=");
  if (open == std::string::npos || close == std::string::npos) {
    bail("bad section name: " + name);
  }
  std::string kind = name.substr(0, open);
  std::uint64_t arg = std::stoull(name.substr(open + 1, close - open - 1));
  std::uint64_t val = std::stoull(name.substr(close + 2));
  if (kind == "bit") {
    if (p.product) bail("bit section on a product point");
    return digit(p, arg) == static_cast<int>(val);
  }
  if (kind == "mod") {
    if (!p.product) bail("mod section on a sequence point");
    return p.index % arg == val;
  }
  bail("bad section name: " + name);
}

// enumeration member i of the class of anchor: flip the digits picked out by
// the bits of i (sequences), or index i (product)
Pt class_member(const Pt& anchor, std::uint64_t i) {
  if (anchor.product) {
    Pt p = anchor;
    p.index = i;
    return p;
  }
  std::size_t top = 0;
  for (std::uint64_t v = i; v != 0; v >>= 1) ++top;
  std::size_t h = std::max(anchor.prefix.size(), top);
  Pt p;
  p.prefix.resize(h);
  for (std::size_t n = 0; n < h; ++n) {
    int d = digit(anchor, n);
    if (n < 64 && ((i >> n) & 1) != 0) d = 1 - d;
    p.prefix[n] = static_cast<char>('0' + d);
  }
  std::size_t len = anchor.period.size();
  std::size_t shift = (h - anchor.prefix.size()) % len;
  p.period = anchor.period.substr(shift) + anchor.period.substr(0, shift);
  return p;
}

Pt retract_pt(const std::string& section, const Pt& p, std::uint64_t fuel) {
  for (std::uint64_t i = 0; i < fuel; ++i) {
    Pt cand = class_member(p, i);
    if (in_section(section, cand)) return cand;
  }
  bail("no section member found within the retraction fuel");
}

int evaluate(const OJson& spec, std::vector<Pt> pts);

int evaluate_sized(const OJson& spec, std::vector<Pt> pts) {
  if (static_cast<int>(pts.size()) != spec_dimension(spec)) {
    bail("point set size does not match the coloring dimension");
  }
  return evaluate(spec, std::move(pts));
}

int evaluate(const OJson& spec, std::vector<Pt> pts) {
  std::string kind = spec.at("kind").get<std::string>();
  if (kind == "parity") return parity_value(pts.at(0), pts.at(1));
  if (kind == "adjacency") return adjacency_value(pts.at(0), pts.at(1));
  if (kind == "constant") return spec.at("value").get<int>();
  if (kind == "random") {
    int colors = spec.at("colors").get<int>();
    std::uint64_t seed = spec.at("seed").get<std::uint64_t>();
    std::vector<std::uint64_t> seps;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        if (!related(pts[i], pts[j])) bail("random coloring on unrelated points");
        seps.push_back(separation(pts[i], pts[j]));
      }
    }
    std::sort(seps.begin(), seps.end());
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t s : seps) h = splitmix64(h ^ (s + 1));
    return 1 + static_cast<int>(h % static_cast<std::uint64_t>(colors));
  }
  if (kind == "lift") {
    int inner = spec_dimension(spec.at("base"));
    std::sort(pts.begin(), pts.end(), canon_less);
    pts.resize(static_cast<std::size_t>(inner));
    return evaluate_sized(spec.at("base"), std::move(pts));
  }
  if (kind == "fix") {
    Pt y = parse_pt(spec.at("point").get<std::string>());
    for (const Pt& p : pts) {
      if (sem_equal(p, y)) bail("fixed point occurs in the argument set");
    }
    pts.push_back(std::move(y));
    return evaluate_sized(spec.at("base"), std::move(pts));
  }
  if (kind == "extend") {
    std::string section = spec.at("section").get<std::string>();
    std::uint64_t fuel =
        spec.contains("fuel") ? spec.at("fuel").get<std::uint64_t>() : 10000;
    std::vector<Pt> mapped;
    for (const Pt& p : pts) mapped.push_back(retract_pt(section, p, fuel));
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      for (std::size_t j = i + 1; j < mapped.size(); ++j) {
        if (sem_equal(mapped[i], mapped[j])) return 1;
      }
    }
    return evaluate_sized(spec.at("base"), std::move(mapped));
  }
  bail("unknown coloring kind: " + kind);
}

// runs fn over every size-r index combination; fn returning false stops early
template <typename Fn>
bool each_combination(std::size_t total, std::size_t r, Fn fn) {
  if (r > total) return true;
  std::vector<std::size_t> idx(r);
  for (std::size_t t = 0; t < r; ++t) idx[t] = t;
  for (;;) {
    if (!fn(idx)) return false;
    std::size_t t = r;
    bool advanced = false;
    while (t > 0) {
      --t;
      if (idx[t] + (r - t) < total) {
        ++idx[t];
        for (std::size_t u = t + 1; u < r; ++u) idx[u] = idx[u - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) return true;
  }
}

Verdict check_point_set(const std::vector<Pt>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (sem_equal(pts[i], pts[j])) {
        return {false, "points " + std::to_string(i) + " and " +
                           std::to_string(j) + " coincide"};
      }
      if (!related(pts[i], pts[j])) {
        return {false, "points " + std::to_string(i) + " and " +
                           std::to_string(j) + " are unrelated"};
      }
    }
  }
  return {true, ""};
}

}  // namespace

Verdict verify_certificate_text(const std::string& json_text) {
  try {
    OJson doc = OJson::parse(json_text);
    std::vector<Pt> pts;
    for (const auto& lit : doc.at("points")) {
      pts.push_back(parse_pt(lit.get<std::string>()));
    }
    int color = doc.at("color").get<int>();
    const OJson& spec = doc.at("coloring");
    std::size_t n = static_cast<std::size_t>(spec_dimension(spec));

    Verdict base = check_point_set(pts);
    if (!base.pass) return base;
    if (pts.size() < n) {
      return {true, "fewer points than the dimension, nothing to check"};
    }

    std::string failure;
    bool all = each_combination(pts.size(), n, [&](const std::vector<std::size_t>& idx) {
      std::vector<Pt> edge;
      for (std::size_t t : idx) edge.push_back(pts[t]);
      int got = evaluate_sized(spec, std::move(edge));
      if (got != color) {
        failure = "a subset takes color " + std::to_string(got) +
                  " instead of " + std::to_string(color);
        return false;
      }
      return true;
    });
    if (!all) return {false, failure};
    return {true, "all " + std::to_string(n) + "-subsets take color " +
                      std::to_string(color)};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

Verdict verify_trace_text(const std::string& json_text) {
  try {
    OJson doc = OJson::parse(json_text);
    const OJson& spec = doc.at("coloring");
    std::size_t n = static_cast<std::size_t>(spec_dimension(spec));
    std::size_t i_max = doc.at("i_max").get<std::size_t>();

    std::optional<int> least_complete;
    for (const auto& track : doc.at("tracks")) {
      int color = track.at("color").get<int>();
      bool complete = track.at("complete").get<bool>();
      const OJson& stages = track.at("stages");
      bool all_defined = !stages.empty();
      for (std::size_t t = 0; t < stages.size(); ++t) {
        const OJson& st = stages[t];
        if (st.at("level").get<std::size_t>() != t) {
          return {false, "stage levels out of order in color " +
                             std::to_string(color)};
        }
        std::string status = st.at("status").get<std::string>();
        if (status != "defined") {
          all_defined = false;
          if (t + 1 != stages.size()) {
            return {false, "track continues past an undefined stage"};
          }
          if (status == "undefined-empty") {
            // only a constant coloring that misses the color justifies this
            if (spec.at("kind").get<std::string>() != "constant" ||
                spec.at("value").get<int>() == color) {
              return {false, "emptiness claim without a syntactic reason"};
            }
          }
          continue;
        }
        if (st.at("value").is_null()) {
          return {false, "defined stage without a value"};
        }
        if (t == 0) continue;
        Pt value = parse_pt(st.at("value").get<std::string>());
        std::vector<Pt> k;
        for (const auto& lit : st.at("k_set")) {
          k.push_back(parse_pt(lit.get<std::string>()));
        }
        for (const Pt& m : k) {
          if (sem_equal(m, value)) {
            return {false, "stage value re-picks a settled point"};
          }
          if (!zeta_below(m, value)) {
            return {false, "stage value is not above the settled points"};
          }
        }
        if (n >= 1 && k.size() >= n - 1) {
          std::string failure;
          bool all = each_combination(k.size(), n - 1,
                                      [&](const std::vector<std::size_t>& idx) {
            std::vector<Pt> edge;
            for (std::size_t u : idx) edge.push_back(k[u]);
            edge.push_back(value);
            int got = evaluate_sized(spec, std::move(edge));
            if (got != color) {
              failure = "stage " + std::to_string(t) + " of color " +
                        std::to_string(color) + " pairs with color " +
                        std::to_string(got);
              return false;
            }
            return true;
          });
          if (!all) return {false, failure};
        }
      }
      bool full_length = stages.size() == i_max + 1;
      if (complete != (all_defined && full_length)) {
        return {false, "complete flag disagrees with the stages of color " +
                           std::to_string(color)};
      }
      if (complete && !least_complete) least_complete = color;
    }

    const OJson& chosen = doc.at("chosen_color");
    if (chosen.is_null() != !least_complete ||
        (least_complete && chosen.get<int>() != *least_complete)) {
      return {false, "chosen color disagrees with the tracks"};
    }

    std::vector<Pt> emitted;
    for (const auto& lit : doc.at("emitted")) {
      emitted.push_back(parse_pt(lit.get<std::string>()));
    }
    if (least_complete) {
      for (const auto& track : doc.at("tracks")) {
        if (track.at("color").get<int>() != *least_complete) continue;
        const OJson& stages = track.at("stages");
        if (stages.size() != emitted.size()) {
          return {false, "emitted length disagrees with the chosen track"};
        }
        for (std::size_t t = 0; t < emitted.size(); ++t) {
          if (!sem_equal(emitted[t],
                         parse_pt(stages[t].at("value").get<std::string>()))) {
            return {false, "emitted entry " + std::to_string(t) +
                               " disagrees with the chosen track"};
          }
        }
      }
      bool distinct = true;
      for (std::size_t i = 0; i < emitted.size() && distinct; ++i) {
        for (std::size_t j = i + 1; j < emitted.size(); ++j) {
          if (sem_equal(emitted[i], emitted[j])) {
            distinct = false;
            break;
          }
        }
      }
      if (distinct != doc.at("emitted_distinct").get<bool>()) {
        return {false, "distinctness flag disagrees with the emitted points"};
      }
      if (emitted.size() >= n) {
        std::string failure;
        bool all = each_combination(emitted.size(), n,
                                    [&](const std::vector<std::size_t>& idx) {
          std::vector<Pt> edge;
          for (std::size_t u : idx) edge.push_back(emitted[u]);
          int got = evaluate_sized(spec, std::move(edge));
          if (got != *least_complete) {
            failure = "emitted subset takes color " + std::to_string(got);
            return false;
          }
          return true;
        });
        if (!all) return {false, failure};
      }
    } else if (!emitted.empty()) {
      return {false, "emitted points without a chosen color"};
    }
    return {true, "trace checks out"};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

Verdict clique2_scan(const std::string& class_literal, std::size_t count) {
  try {
    Pt anchor = parse_pt(class_literal);
    if (anchor.product) return {false, "parity scan needs a sequence class"};
    std::vector<Pt> members;
    for (std::size_t i = 0; i < count; ++i) {
      members.push_back(class_member(anchor, i));
    }
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        if (parity_value(members[i], members[j]) != 2) continue;
        for (std::size_t k = j + 1; k < count; ++k) {
          if (parity_value(members[i], members[k]) == 2 &&
              parity_value(members[j], members[k]) == 2) {
            return {false, "triple " + std::to_string(i) + "," +
                               std::to_string(j) + "," + std::to_string(k) +
                               " is all color 2"};
          }
        }
      }
    }
    return {true, "no all-2 triple among the first " + std::to_string(count) +
                      " members"};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

Verdict component_census(const std::string& class_literal, std::size_t sample) {
  try {
    Pt anchor = parse_pt(class_literal);
    if (anchor.product) return {false, "parity census needs a sequence class"};
    if (sample < 2) return {false, "census needs at least two members"};
    std::vector<Pt> members;
    for (std::size_t i = 0; i < sample; ++i) {
      members.push_back(class_member(anchor, i));
    }
    std::string assignment(sample, 'A');
    std::size_t other = 0;
    for (std::size_t i = 1; i < sample; ++i) {
      if (parity_value(members[0], members[i]) != 1) {
        assignment[i] = 'B';
        ++other;
      }
    }
    for (std::size_t i = 0; i < sample; ++i) {
      for (std::size_t j = i + 1; j < sample; ++j) {
        bool same_block = assignment[i] == assignment[j];
        bool same_color = parity_value(members[i], members[j]) == 1;
        if (same_block != same_color) {
          return {false, "blocks are inconsistent at " + std::to_string(i) +
                             "," + std::to_string(j)};
        }
      }
    }
    if (other == 0) return {false, "only one block showed up"};
    return {true, assignment};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

}  // namespace oracle
