#ifndef DSHAP_TRANSFORMS_H_
#define DSHAP_TRANSFORMS_H_

#include <vector>

#include "dshap/circuit.h"

namespace dshap {

// Every And/Or gate gets exactly two inputs: wider gates become left-leaning
// chains, single-input gates are paired with the neutral constant. When
// `old_to_new` is given it receives the image of every original gate.
Circuit normalize_fanin2(const Circuit& c, std::vector<GateId>* old_to_new = nullptr);

bool is_fanin2(const Circuit& c);

// Makes every Or gate smooth by conjoining each input with a tautology over
// the variables it misses. Tautologies are shared per variable set.
Circuit smooth(const Circuit& c, std::vector<GateId>* old_to_new = nullptr);

bool is_smooth(const Circuit& c);

// M'(e) = M(e with every feature flipped). Does not claim d-D flags.
Circuit invert_polarity(const Circuit& c);

// Complements the output.
Circuit negate(const Circuit& c);

}  // namespace dshap

#endif  // DSHAP_TRANSFORMS_H_
