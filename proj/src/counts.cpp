#include "autoexplore/counts.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace autoexplore {

void CountsTable::validate() const {
  if (num_states <= 0 || num_actions <= 0) {
    throw std::invalid_argument("counts: dimensions must be positive");
  }
  if (n_sa.size() != static_cast<std::size_t>(num_states) * num_actions ||
      n_sas.size() != n_sa.size() * static_cast<std::size_t>(num_states)) {
    throw std::invalid_argument("counts: array size mismatch");
  }
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      std::int64_t sum = 0;
      for (int y = 0; y < num_states; ++y) sum += count(s, a, y);
      if (sum != count(s, a)) {
        throw std::invalid_argument("counts: N(s,a) != sum N(s,a,s') at (" +
                                    std::to_string(s) + "," +
                                    std::to_string(a) + ")");
      }
    }
  }
}

namespace {

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

CountsTable parse_counts_text(std::istream& in, const std::string& origin) {
  CountsTable c;
  bool header_seen = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream is(line);
    std::string tok;
    if (!(is >> tok) || tok[0] == '#') continue;
    if (tok == "counts") {
      if (header_seen) fail(origin, lineno, "duplicate counts header");
      long S = 0, A = 0;
      if (!(is >> S >> A) || S <= 0 || A <= 0) {
        fail(origin, lineno, "counts header needs positive <S> <A>");
      }
      c = CountsTable(static_cast<int>(S), static_cast<int>(A));
      header_seen = true;
    } else if (tok == "c") {
      if (!header_seen) fail(origin, lineno, "entry before counts header");
      long s = 0, a = 0, s2 = 0;
      long long n = 0;
      if (!(is >> s >> a >> s2 >> n)) {
        fail(origin, lineno, "entry needs <s> <a> <s'> <n>");
      }
      if (s < 0 || s >= c.num_states || s2 < 0 || s2 >= c.num_states ||
          a < 0 || a >= c.num_actions) {
        fail(origin, lineno, "index out of range");
      }
      if (n < 0) fail(origin, lineno, "negative count");
      const std::size_t sa = static_cast<std::size_t>(s) * c.num_actions + a;
      c.n_sa[sa] += n;
      c.n_sas[sa * c.num_states + s2] += n;
      c.total_steps += n;
    } else {
      fail(origin, lineno, "unknown directive '" + tok + "'");
    }
  }
  if (!header_seen) fail(origin, lineno == 0 ? 1 : lineno, "missing counts header");
  return c;
}

CountsTable parse_counts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  return parse_counts_text(in, path);
}

std::string format_counts(const CountsTable& c) {
  std::ostringstream os;
  os << "counts " << c.num_states << ' ' << c.num_actions << '\n';
  for (int s = 0; s < c.num_states; ++s) {
    for (int a = 0; a < c.num_actions; ++a) {
      for (int y = 0; y < c.num_states; ++y) {
        const std::int64_t n = c.count(s, a, y);
        if (n != 0) {
          os << "c " << s << ' ' << a << ' ' << y << ' ' << n << '\n';
        }
      }
    }
  }
  return os.str();
}

void write_counts_file(const CountsTable& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << format_counts(c);
  if (!out) throw ParseError(path + ": write failed");
}

double bernstein_bonus(const CountsTable& c, int s, int a, int s2,
                       double delta) {
  const double n_plus =
      static_cast<double>(std::max<std::int64_t>(1, c.count(s, a)));
  const double phat = c.p_hat(s, a, s2);
  const double log_term = std::log(
      2.0 * c.num_states * c.num_actions * n_plus / delta);
  return 2.0 * std::sqrt(phat * (1.0 - phat) * log_term / n_plus) +
         6.0 * log_term / n_plus;
}

double practical_bonus(const CountsTable& c, int s, int a, int s2) {
  const double n_plus =
      static_cast<double>(std::max<std::int64_t>(1, c.count(s, a)));
  const double phat = c.p_hat(s, a, s2);
  return std::sqrt(phat * (1.0 - phat) / n_plus) + 1.0 / n_plus;
}

}  // namespace autoexplore
