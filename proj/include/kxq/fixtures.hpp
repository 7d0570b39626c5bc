#pragma once

#include <string>
#include <vector>

#include "kxq/graph.hpp"

namespace kxq::fixtures {

/// Six-pair counterexample graph with cycles (A,B), (B,C,E), (C,D,F).
/// Vertices A..F are ids 0..5. The three queried edges of the worked example
/// come first: e1 = A->B (id 0), e2 = B->C (id 1), e3 = C->D (id 2); then
/// B->A, C->E, E->B (weight 1.5), D->F, F->C. Every other weight is 1.
ExchangeGraph counterexample_graph();

inline constexpr EdgeId kE1 = 0;
inline constexpr EdgeId kE2 = 1;
inline constexpr EdgeId kE3 = 2;

/// One ndd n (id 0) feeding the path n -> p1 -> p2 -> p3, plus 2-cycles
/// (p1, p4) and (p2, p5). Pairs p1..p5 are ids 1..5; edge n -> p1 is id 0.
ExchangeGraph chain_example_graph();

/// Names accepted by `by_name`.
std::vector<std::string> names();

/// Throws NotFoundError for unknown names.
ExchangeGraph by_name(const std::string& name);

}  // namespace kxq::fixtures
