#pragma once

#include "wsloop/formula.hpp"

namespace wsloop {

/// Rewrites `f` into the basis fragment consumed by the automata engines:
///
///  * atoms are Eq/Lt/In over bare variables plus Succ/Zero (WS1S) or
///    Succ0/Succ1/Root (WS2S);
///  * connectives are Not/And/Or, quantifiers are ExistsFO/ExistsSO;
///  * `t + n`, `t.w`, numerals and root paths become chains of fresh
///    existentially quantified variables linked by successor atoms.
///
/// Fresh variables are named `_v<N>`; the parser rejects that prefix, so
/// they never collide with user names.
Formula normalize(const Formula& f);

/// True when `f` is in the fragment produced by normalize().
bool is_normalized(const Formula& f);

}  // namespace wsloop
