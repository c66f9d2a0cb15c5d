#ifndef DSHAP_TESTS_FIXTURES_H_
#define DSHAP_TESTS_FIXTURES_H_

#include "dshap/circuit.h"

namespace dshap::testing {

// fg and (dtr or (nf and na and not dtr)). The three-input And lists nf, na
// first so that fan-in-2 normalization produces the (nf and na) gate.
struct Example {
  SpacePtr space = FeatureSpace::binary({"fg", "dtr", "nf", "na"});
  GateId fg = 0, dtr = 0, nf = 0, na = 0, not_dtr = 0, conj = 0, disj = 0, top = 0;
  Circuit circuit;
  Entity entity = Entity::binary(space, {1, 0, 1, 1});

  Example() : circuit(build()) {}

 private:
  Circuit build() {
    CircuitBuilder b(space);
    fg = b.add_variable("fg");
    dtr = b.add_variable("dtr");
    nf = b.add_variable("nf");
    na = b.add_variable("na");
    not_dtr = b.add_not(dtr);
    conj = b.add_and({nf, na, not_dtr});
    disj = b.add_or({dtr, conj});
    top = b.add_and({fg, disj});
    return b.build(top);
  }
};

}  // namespace dshap::testing

#endif  // DSHAP_TESTS_FIXTURES_H_
