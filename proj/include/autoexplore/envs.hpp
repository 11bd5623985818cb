#pragma once

#include <string>
#include <vector>

#include "autoexplore/mdp.hpp"

namespace autoexplore {

// Chain of length C with a set of Kc confusing states. Action a0 moves one
// step forward with probability p_c (self-loop otherwise); action a1 in the
// start state jumps uniformly to a confusing state, and inside the chain
// skips m states ahead with probability p_skip (self-loop otherwise). Every
// action at the chain end and at a confusing state leads back to the start /
// to the chain end, respectively. The reset action is appended last.
// States: 0 = start, 1..C = chain, C+1..C+Kc = confusing.
TabularMdp make_confusing_chain(int C = 5, int Kc = 6, int m = 4,
                                double p_skip = 1.0 / 3.0, double p_c = 1.0);

// Stochastic chain of N states. Action a1 (right) moves deterministically one
// step right; action a0 (left) from x_k jumps to x_l (l < k) with probability
// proportional to 1/(k-l). End states absorb under their outward action:
// p(x_0|x_0,a0) = 1 and p(x_{N-1}|x_{N-1},a1) = 1. The initial state sits at
// two thirds of the chain (state floor(2N/3), counting from one). The reset
// action is appended last.
TabularMdp make_combination_lock(int N = 6);

// Three deterministic layers fanning out of the start: the single non-reset
// action moves from the start uniformly over the three layer-1 states, then
// deterministically through layer 2 to a final self-looping state.
// 8 states, 2 actions (move + reset).
TabularMdp make_layered_star();

// Resolves an environment argument: one of "confusing-chain",
// "combination-lock", "layered-star", or "file:<path>". params are "key=value"
// overrides for the named constructors (C, Kc, m, p_skip, p_c; N). Throws
// std::invalid_argument on unknown names, parameters, or malformed values.
TabularMdp make_env(const std::string& env_arg,
                    const std::vector<std::string>& params);

}  // namespace autoexplore
