#include "autoexplore/envs.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace autoexplore {

namespace {

TabularMdp blank_env(int S, int A, int start, int reset) {
  TabularMdp m;
  m.num_states = S;
  m.num_actions = A;
  m.start_state = start;
  m.reset_action = reset;
  m.p.assign(static_cast<std::size_t>(S) * A * S, 0.0);
  return m;
}

void fill_reset_rows(TabularMdp& m) {
  for (int s = 0; s < m.num_states; ++s) {
    m.prob_ref(s, m.reset_action, m.start_state) = 1.0;
  }
}

}  // namespace

TabularMdp make_confusing_chain(int C, int Kc, int m_skip, double p_skip,
                                double p_c) {
  if (C < 1 || Kc < 1 || m_skip < 1) {
    throw std::invalid_argument("confusing chain: sizes must be positive");
  }
  if (p_skip < 0.0 || p_skip > 1.0 || p_c < 0.0 || p_c > 1.0) {
    throw std::invalid_argument("confusing chain: probabilities outside [0,1]");
  }
  // States: 0 = start, 1..C = chain, C+1..C+Kc = confusing.
  // Actions: 0 = forward, 1 = skip/confuse, 2 = reset.
  TabularMdp m = blank_env(C + Kc + 1, 3, 0, 2);
  m.prob_ref(0, 0, std::min(C, 1)) += p_c;
  m.prob_ref(0, 0, 0) += 1.0 - p_c;
  for (int j = 1; j <= Kc; ++j) m.prob_ref(0, 1, C + j) = 1.0 / Kc;
  for (int i = 1; i < C; ++i) {
    m.prob_ref(i, 0, std::min(C, i + 1)) += p_c;
    m.prob_ref(i, 0, i) += 1.0 - p_c;
    m.prob_ref(i, 1, std::min(C, i + m_skip)) += p_skip;
    m.prob_ref(i, 1, i) += 1.0 - p_skip;
  }
  for (int a = 0; a < 2; ++a) {
    m.prob_ref(C, a, 0) = 1.0;  // chain end loops back to the start
    for (int j = 1; j <= Kc; ++j) {
      m.prob_ref(C + j, a, C) = 1.0;  // confusing states drop to the end
    }
  }
  fill_reset_rows(m);
  m.validate();
  return m;
}

TabularMdp make_combination_lock(int N) {
  if (N < 2) throw std::invalid_argument("combination lock: need >= 2 states");
  // Actions: 0 = left (harmonic jump back), 1 = right, 2 = reset.
  // Start at two thirds of the chain, counting positions from one.
  const int start = 2 * N / 3 - 1;
  TabularMdp m = blank_env(N, 3, start, 2);
  for (int k = 0; k < N; ++k) {
    if (k == 0) {
      m.prob_ref(0, 0, 0) = 1.0;
    } else {
      double norm = 0.0;
      for (int l = 0; l < k; ++l) norm += 1.0 / (k - l);
      for (int l = 0; l < k; ++l) m.prob_ref(k, 0, l) = 1.0 / (k - l) / norm;
    }
    m.prob_ref(k, 1, std::min(N - 1, k + 1)) = 1.0;
  }
  fill_reset_rows(m);
  m.validate();
  return m;
}

TabularMdp make_layered_star() {
  // 0 = start, 1..3 = first layer (uniform from the start), 4..6 = second
  // layer (deterministic continuations), 7 = final state (self-loop).
  // Actions: 0 = move, 1 = reset.
  TabularMdp m = blank_env(8, 2, 0, 1);
  for (int j = 1; j <= 3; ++j) {
    m.prob_ref(0, 0, j) = 1.0 / 3.0;
    m.prob_ref(j, 0, j + 3) = 1.0;
    m.prob_ref(j + 3, 0, 7) = 1.0;
  }
  m.prob_ref(7, 0, 7) = 1.0;
  fill_reset_rows(m);
  m.validate();
  return m;
}

namespace {

std::map<std::string, std::string> parse_kv(
    const std::vector<std::string>& params) {
  std::map<std::string, std::string> kv;
  for (const std::string& p : params) {
    const std::size_t eq = p.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == p.size()) {
      throw std::invalid_argument("env parameter not of the form key=value: " +
                                  p);
    }
    if (!kv.emplace(p.substr(0, eq), p.substr(eq + 1)).second) {
      throw std::invalid_argument("duplicate env parameter: " + p);
    }
  }
  return kv;
}

int take_int(std::map<std::string, std::string>& kv, const std::string& key,
             int fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size()) {
    throw std::invalid_argument("env parameter " + key +
                                ": not an integer: " + it->second);
  }
  kv.erase(it);
  return value;
}

double take_real(std::map<std::string, std::string>& kv, const std::string& key,
                 double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size()) {
    throw std::invalid_argument("env parameter " + key +
                                ": not a number: " + it->second);
  }
  kv.erase(it);
  return value;
}

void reject_leftovers(const std::map<std::string, std::string>& kv,
                      const std::string& env) {
  if (!kv.empty()) {
    throw std::invalid_argument("unknown parameter for " + env + ": " +
                                kv.begin()->first);
  }
}

}  // namespace

TabularMdp make_env(const std::string& env_arg,
                    const std::vector<std::string>& params) {
  if (env_arg.rfind("file:", 0) == 0) {
    if (!params.empty()) {
      throw std::invalid_argument("file environments take no parameters");
    }
    return parse_mdp_file(env_arg.substr(5));
  }
  auto kv = parse_kv(params);
  if (env_arg == "confusing-chain") {
    const int C = take_int(kv, "C", 5);
    const int Kc = take_int(kv, "Kc", 6);
    const int m_skip = take_int(kv, "m", 4);
    const double p_skip = take_real(kv, "p_skip", 1.0 / 3.0);
    const double p_c = take_real(kv, "p_c", 1.0);
    reject_leftovers(kv, env_arg);
    return make_confusing_chain(C, Kc, m_skip, p_skip, p_c);
  }
  if (env_arg == "combination-lock") {
    const int N = take_int(kv, "N", 6);
    reject_leftovers(kv, env_arg);
    return make_combination_lock(N);
  }
  if (env_arg == "layered-star") {
    reject_leftovers(kv, env_arg);
    return make_layered_star();
  }
  throw std::invalid_argument("unknown environment: " + env_arg);
}

}  // namespace autoexplore
