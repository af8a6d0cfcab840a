#include "decor/pipeline.hpp"

#include "decor/random.hpp"
#include "decor/rewrite.hpp"

namespace decor {

LockedCircuit lock_with_scheme(const Circuit& c, const SchemeSpec& spec, std::uint64_t seed) {
  SchemeParams params;
  params.key_size = spec.key_size;
  params.seed = seed;
  params.allow_duplicate_inputs = spec.allow_duplicate_inputs;
  params.normalize = spec.normalize;
  params.oracle = spec.oracle;

  Rng base_rng(derive_seed(seed, "base-lock"));
  LockResult base = base_scheme(spec.scheme) == Scheme::Xbi ? lock_xbi(c, params, base_rng)
                                                            : lock_sarlock(c, params, base_rng);
  if (is_decor(spec.scheme)) {
    DecorConfig cfg;
    cfg.max_correct_keys = spec.max_keys;
    cfg.seed = seed;
    cfg.rewrite_passes = spec.synth_passes;
    cfg.oracle = spec.oracle;
    Rng decor_rng(derive_seed(seed, "decor"));
    return decor_enhance(base.locked, base.key, cfg, decor_rng).locked;
  }
  if (spec.synth_passes == 0) return std::move(base.locked);
  Rng synth(derive_seed(seed, "synth"));
  Circuit rewritten = synthesize(base.locked.circuit(), synth, spec.synth_passes);
  return LockedCircuit::verified(std::move(rewritten), base.locked.scheme(), base.locked.correct_keys(), c,
                                 spec.oracle);
}

}  // namespace decor
