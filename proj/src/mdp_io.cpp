#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "autoexplore/mdp.hpp"

namespace autoexplore {

namespace {

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + msg);
}

// Splits a line into whitespace tokens, dropping trailing comments.
std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

long parse_long(const std::string& tok, const std::string& origin, int line) {
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "expected an integer, got '" + tok + "'");
  }
}

double parse_double(const std::string& tok, const std::string& origin,
                    int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + tok + "'");
  }
}

}  // namespace

TabularMdp parse_mdp_text(std::istream& in, const std::string& origin) {
  TabularMdp m;
  bool header_seen = false;
  int header_line = 0;
  std::string line;
  int lineno = 0;
  // Row bookkeeping for the row-sum check: last entry line per (s,a).
  std::vector<int> row_last_line;

  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (toks[0] == "mdp") {
      if (header_seen) fail(origin, lineno, "duplicate mdp header");
      if (toks.size() != 5) {
        fail(origin, lineno, "mdp header needs <S> <A> <s0> <reset_action>");
      }
      const long S = parse_long(toks[1], origin, lineno);
      const long A = parse_long(toks[2], origin, lineno);
      const long s0 = parse_long(toks[3], origin, lineno);
      const long ra = parse_long(toks[4], origin, lineno);
      if (S <= 0 || A <= 0) fail(origin, lineno, "S and A must be positive");
      if (s0 < 0 || s0 >= S) fail(origin, lineno, "start state out of range");
      if (ra < 0 || ra >= A) fail(origin, lineno, "reset action out of range");
      m.num_states = static_cast<int>(S);
      m.num_actions = static_cast<int>(A);
      m.start_state = static_cast<int>(s0);
      m.reset_action = static_cast<int>(ra);
      m.p.assign(static_cast<std::size_t>(S) * A * S, 0.0);
      row_last_line.assign(static_cast<std::size_t>(S) * A, 0);
      header_seen = true;
      header_line = lineno;
    } else if (toks[0] == "t") {
      if (!header_seen) fail(origin, lineno, "transition before mdp header");
      if (toks.size() != 5) {
        fail(origin, lineno, "transition needs <s> <a> <s'> <prob>");
      }
      const long s = parse_long(toks[1], origin, lineno);
      const long a = parse_long(toks[2], origin, lineno);
      const long s2 = parse_long(toks[3], origin, lineno);
      const double prob = parse_double(toks[4], origin, lineno);
      if (s < 0 || s >= m.num_states || s2 < 0 || s2 >= m.num_states) {
        fail(origin, lineno, "state index out of range");
      }
      if (a < 0 || a >= m.num_actions) {
        fail(origin, lineno, "action index out of range");
      }
      if (prob < 0.0 || prob > 1.0) {
        fail(origin, lineno, "probability outside [0,1]");
      }
      m.prob_ref(static_cast<int>(s), static_cast<int>(a),
                 static_cast<int>(s2)) = prob;
      row_last_line[static_cast<std::size_t>(s) * m.num_actions + a] = lineno;
    } else {
      fail(origin, lineno, "unknown directive '" + toks[0] + "'");
    }
  }
  if (!header_seen) fail(origin, lineno == 0 ? 1 : lineno, "missing mdp header");

  for (int s = 0; s < m.num_states; ++s) {
    for (int a = 0; a < m.num_actions; ++a) {
      const double* r = m.row(s, a);
      double sum = 0.0;
      for (int y = 0; y < m.num_states; ++y) sum += r[y];
      if (std::abs(sum - 1.0) > 1e-9) {
        const int where =
            row_last_line[static_cast<std::size_t>(s) * m.num_actions + a];
        fail(origin, where > 0 ? where : header_line,
             "row (" + std::to_string(s) + "," + std::to_string(a) +
                 ") sums to " + std::to_string(sum) + ", expected 1");
      }
    }
  }
  return m;
}

TabularMdp parse_mdp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  return parse_mdp_text(in, path);
}

std::string format_mdp(const TabularMdp& m) {
  std::ostringstream os;
  os.precision(17);
  os << "mdp " << m.num_states << ' ' << m.num_actions << ' ' << m.start_state
     << ' ' << m.reset_action << '\n';
  for (int s = 0; s < m.num_states; ++s) {
    for (int a = 0; a < m.num_actions; ++a) {
      const double* r = m.row(s, a);
      for (int y = 0; y < m.num_states; ++y) {
        if (r[y] != 0.0) {
          os << "t " << s << ' ' << a << ' ' << y << ' ' << r[y] << '\n';
        }
      }
    }
  }
  return os.str();
}

void write_mdp_file(const TabularMdp& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << format_mdp(m);
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace autoexplore
