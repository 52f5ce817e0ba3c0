#include "support/gen.hpp"

namespace lawfuzz::testing {

namespace {

const char* kBoolVars[] = {"a", "b", "c"};

Interval random_interval(Rng& rng) {
  if (rng.chance(0.3)) return Interval{};  // [0, inf)
  std::int64_t lo = static_cast<std::int64_t>(rng.below(3));
  std::int64_t hi = lo + static_cast<std::int64_t>(rng.below(4));
  return Interval{lo, hi};
}

Formula gen_bool(Rng& rng, int depth, const FormulaGenOptions& opts) {
  if (depth <= 0 || rng.chance(0.25)) {
    return make_atom(SignalRef{kBoolVars[rng.below(3)], std::nullopt, std::nullopt});
  }
  int choices = opts.allow_temporal ? (opts.allow_implies ? 9 : 8)
                                    : (opts.allow_implies ? 5 : 4);
  switch (rng.below(choices)) {
    case 0:
      return make_not(gen_bool(rng, depth - 1, opts));
    case 1:
      return make_and(gen_bool(rng, depth - 1, opts), gen_bool(rng, depth - 1, opts));
    case 2:
      return make_or(gen_bool(rng, depth - 1, opts), gen_bool(rng, depth - 1, opts));
    case 3:
      return make_not(make_not(gen_bool(rng, depth - 1, opts)));  // stresses ~~ removal
    case 4:
      if (!opts.allow_temporal) {
        return make_implies(gen_bool(rng, depth - 1, opts), gen_bool(rng, depth - 1, opts));
      }
      return make_always(random_interval(rng), gen_bool(rng, depth - 1, opts));
    case 5:
      return make_eventually(random_interval(rng), gen_bool(rng, depth - 1, opts));
    case 6:
      return make_until(random_interval(rng), gen_bool(rng, depth - 1, opts),
                        gen_bool(rng, depth - 1, opts));
    case 7:
      return make_next(gen_bool(rng, depth - 1, opts));
    default:
      return make_implies(gen_bool(rng, depth - 1, opts), gen_bool(rng, depth - 1, opts));
  }
}

}  // namespace

Formula random_bool_formula(Rng& rng, const FormulaGenOptions& opts) {
  return gen_bool(rng, opts.max_depth, opts);
}

Formula random_numeric_formula(Rng& rng, int max_depth) {
  if (max_depth <= 0 || rng.chance(0.3)) {
    const char* signal = rng.chance(0.5) ? "u" : "v";
    CmpOp ops[] = {CmpOp::Gt, CmpOp::Lt, CmpOp::Ge, CmpOp::Le, CmpOp::Eq, CmpOp::Ne};
    CmpOp op = ops[rng.below(6)];
    double threshold = static_cast<double>(rng.below(7));
    return make_atom(Comparison{SignalRef{signal, std::nullopt, std::nullopt}, op, threshold});
  }
  switch (rng.below(7)) {
    case 0:
      return make_not(random_numeric_formula(rng, max_depth - 1));
    case 1:
      return make_and(random_numeric_formula(rng, max_depth - 1),
                      random_numeric_formula(rng, max_depth - 1));
    case 2:
      return make_or(random_numeric_formula(rng, max_depth - 1),
                     random_numeric_formula(rng, max_depth - 1));
    case 3:
      return make_always(random_interval(rng), random_numeric_formula(rng, max_depth - 1));
    case 4:
      return make_eventually(random_interval(rng),
                             random_numeric_formula(rng, max_depth - 1));
    case 5:
      return make_until(random_interval(rng), random_numeric_formula(rng, max_depth - 1),
                        random_numeric_formula(rng, max_depth - 1));
    default:
      return make_next(random_numeric_formula(rng, max_depth - 1));
  }
}

Trace random_bool_trace(Rng& rng, int len) {
  Trace pi;
  for (int t = 0; t < len; ++t) {
    Scene s;
    for (const char* var : kBoolVars) s.signals[var] = rng.chance(0.5);
    pi.scenes.push_back(std::move(s));
  }
  return pi;
}

std::vector<Trace> all_bool_traces(int len) {
  std::vector<Trace> out;
  int total = 1;
  for (int i = 0; i < len; ++i) total *= 8;
  for (int code = 0; code < total; ++code) {
    Trace pi;
    int c = code;
    for (int t = 0; t < len; ++t) {
      Scene s;
      s.signals["a"] = (c & 1) != 0;
      s.signals["b"] = (c & 2) != 0;
      s.signals["c"] = (c & 4) != 0;
      c >>= 3;
      pi.scenes.push_back(std::move(s));
    }
    out.push_back(std::move(pi));
  }
  return out;
}

Trace random_numeric_trace(Rng& rng, int len) {
  Trace pi;
  for (int t = 0; t < len; ++t) {
    Scene s;
    s.signals["u"] = rng.uniform(-1.0, 8.0);
    s.signals["v"] = rng.uniform(-1.0, 8.0);
    pi.scenes.push_back(std::move(s));
  }
  return pi;
}

}  // namespace lawfuzz::testing
