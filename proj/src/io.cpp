#include "bcnq/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace bcnq::io {

namespace {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> tokens;
};

struct Section {
  std::string key;
  std::size_t line = 0;
  std::vector<std::string> values; // inline, after the key
  std::vector<Row> rows;
};

class Document {
public:
  Document(std::istream& in, const std::string& schema) {
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    while (std::getline(in, text)) {
      ++line;
      if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
      std::istringstream ss(text);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (tokens.empty()) continue;
      if (!have_header) {
        if (tokens[0] != schema)
          throw ParseError("expected header '" + schema + " 1', found '" + tokens[0] + "'", line);
        if (tokens.size() != 2 || tokens[1] != "1")
          throw ParseError("unsupported " + schema + " version", line);
        have_header = true;
        continue;
      }
      if (std::islower(static_cast<unsigned char>(tokens[0][0]))) {
        Section s{tokens[0], line, {tokens.begin() + 1, tokens.end()}, {}};
        for (const auto& other : sections_)
          if (other.key == s.key) throw ParseError("duplicate section '" + s.key + "'", line);
        sections_.push_back(std::move(s));
      } else {
        if (sections_.empty()) throw ParseError("data before the first section", line);
        sections_.back().rows.push_back({line, std::move(tokens)});
      }
    }
    if (!have_header) throw ParseError("empty input, expected '" + schema + " 1'");
    end_line_ = line;
  }

  const Section* find(const std::string& key) const {
    for (const auto& s : sections_)
      if (s.key == key) return &s;
    return nullptr;
  }

  const Section& get(const std::string& key) const {
    if (const auto* s = find(key)) return *s;
    throw ParseError("missing section '" + key + "'", end_line_);
  }

  std::size_t scalar(const std::string& key) const {
    const auto& s = get(key);
    if (s.values.size() != 1 || !s.rows.empty())
      throw ParseError("'" + key + "' takes exactly one value", s.line);
    return to_index(s.values[0], s.line);
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& s : sections_) {
      bool ok = false;
      for (const char* k : keys) ok |= s.key == k;
      if (!ok) throw ParseError("unknown section '" + s.key + "'", s.line);
    }
  }

  static std::size_t to_index(const std::string& token, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw ParseError("expected a non-negative integer, found '" + token + "'", line);
    return v;
  }

private:
  std::vector<Section> sections_;
  std::size_t end_line_ = 0;
};

struct Entry {
  std::size_t value;
  std::size_t line;
};

// All tokens of a section's data rows (and inline values) as indices.
std::vector<Entry> entries(const Section& s) {
  std::vector<Entry> out;
  for (const auto& v : s.values) out.push_back({Document::to_index(v, s.line), s.line});
  for (const auto& r : s.rows)
    for (const auto& t : r.tokens) out.push_back({Document::to_index(t, r.line), r.line});
  return out;
}

std::vector<std::size_t> indices_in_range(const Section& s, std::size_t count, std::size_t hi,
                                          const std::string& what) {
  const auto e = entries(s);
  if (e.size() != count)
    throw ParseError("'" + s.key + "' has " + std::to_string(e.size()) + " entries, expected " +
                         std::to_string(count),
                     s.line);
  std::vector<std::size_t> v;
  v.reserve(e.size());
  for (const auto& [x, line] : e) {
    if (x == 0 || x > hi)
      throw ParseError(what + " " + std::to_string(x) + " outside [1, " + std::to_string(hi) + "]",
                       line);
    v.push_back(x);
  }
  return v;
}

// Data rows of a section, each with exactly `width` rationals.
std::vector<std::vector<Rational>> rational_rows(const Section& s, std::size_t count,
                                                 std::size_t width) {
  if (!s.values.empty()) throw ParseError("'" + s.key + "' takes no inline values", s.line);
  if (s.rows.size() != count)
    throw ParseError("'" + s.key + "' has " + std::to_string(s.rows.size()) +
                         " rows, expected " + std::to_string(count),
                     s.line);
  std::vector<std::vector<Rational>> out;
  for (const auto& r : s.rows) {
    if (r.tokens.size() != width)
      throw ParseError("row has " + std::to_string(r.tokens.size()) + " entries, expected " +
                           std::to_string(width),
                       r.line);
    auto& dst = out.emplace_back();
    for (const auto& t : r.tokens) {
      try {
        dst.push_back(parse_rational(t));
      } catch (const ParseError& e) {
        throw ParseError(e.detail(), r.line);
      }
    }
  }
  return out;
}

void write_row(std::ostream& out, std::span<const std::size_t> values, std::size_t first,
               std::size_t count) {
  for (std::size_t j = 0; j < count; ++j) out << (j ? " " : "") << values[first + j];
  out << '\n';
}

void write_rational_row(std::ostream& out, std::span<const Rational> values) {
  for (std::size_t j = 0; j < values.size(); ++j)
    out << (j ? " " : "") << format_rational(values[j]);
  out << '\n';
}

template <typename T, typename Fn>
T load_file(const std::filesystem::path& path, Fn reader) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return reader(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

} // namespace

Rational parse_rational(const std::string& token) {
  const auto bad = [&] { return ParseError("invalid rational '" + token + "'"); };
  if (token.empty()) throw bad();
  std::string body = token;
  bool negative = false;
  if (body[0] == '-' || body[0] == '+') {
    negative = body[0] == '-';
    body.erase(0, 1);
  }
  const auto digits = [](const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
  };
  // cpp_int treats a leading 0 as an octal prefix.
  const auto integer = [](const std::string& s) {
    const auto first = s.find_first_not_of('0');
    return boost::multiprecision::cpp_int(first == std::string::npos ? "0" : s.substr(first));
  };
  Rational r;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    const std::string num = body.substr(0, slash);
    const std::string den = body.substr(slash + 1);
    if (!digits(num) || !digits(den)) throw bad();
    const auto d = integer(den);
    if (d == 0) throw bad();
    r = Rational(integer(num), d);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    const std::string whole = body.substr(0, dot);
    const std::string frac = body.substr(dot + 1);
    if ((!whole.empty() && !digits(whole)) || !digits(frac)) throw bad();
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    r = Rational(integer(whole + frac), scale);
  } else {
    if (!digits(body)) throw bad();
    r = Rational(integer(body));
  }
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& r) { return r.str(); }

// --- network ----------------------------------------------------------------

Bcn read_network(std::istream& in) {
  Document doc(in, "bcnq-network");
  doc.allow_only({"states", "inputs", "columns"});
  const std::size_t n = doc.scalar("states");
  const std::size_t m = doc.scalar("inputs");
  if (n == 0 || m == 0) throw ParseError("'states' and 'inputs' must be positive");
  auto cols = indices_in_range(doc.get("columns"), n * m, n, "column entry");
  return Bcn(n, m, std::move(cols));
}

void write_network(std::ostream& out, const Bcn& bcn) {
  out << "bcnq-network 1\n"
      << "states " << bcn.n_states() << '\n'
      << "inputs " << bcn.n_inputs() << '\n'
      << "columns\n";
  for (std::size_t u = 0; u < bcn.n_inputs(); ++u)
    write_row(out, bcn.matrix().indices(), u * bcn.n_states(), bcn.n_states());
}

// --- truth table --------------------------------------------------------------

TruthTable read_truth_table(std::istream& in) {
  Document doc(in, "bcnq-truthtable");
  doc.allow_only({"n", "m", "rows"});
  TruthTable tt;
  tt.n = doc.scalar("n");
  tt.m = doc.scalar("m");
  if (tt.n == 0) throw ParseError("'n' must be positive");
  if (tt.n + tt.m > 24) throw ParseError("truth tables are limited to n + m <= 24");
  const auto& rows = doc.get("rows");
  const std::size_t vars = tt.n + tt.m;
  const std::size_t expected = std::size_t{1} << vars;
  if (rows.rows.size() != expected)
    throw ParseError("truth table has " + std::to_string(rows.rows.size()) +
                         " rows, expected 2^" + std::to_string(vars) + " = " +
                         std::to_string(expected),
                     rows.line);
  const auto bit = [](const std::string& t, std::size_t line) {
    if (t == "1") return true;
    if (t == "0") return false;
    throw ParseError("expected 1 or 0, found '" + t + "'", line);
  };
  for (std::size_t r = 0; r < expected; ++r) {
    const auto& row = rows.rows[r];
    std::vector<std::string> outputs = row.tokens;
    if (auto bar = std::find(row.tokens.begin(), row.tokens.end(), "|"); bar != row.tokens.end()) {
      const std::size_t given = static_cast<std::size_t>(bar - row.tokens.begin());
      if (given != vars)
        throw ParseError("row " + std::to_string(r + 1) + " lists " + std::to_string(given) +
                             " argument values, expected " + std::to_string(vars),
                         row.line);
      for (std::size_t k = 0; k < vars; ++k) {
        // Position r enumerates values with 1 before 0, most significant first.
        const bool expect = ((r >> (vars - 1 - k)) & 1U) == 0;
        if (bit(row.tokens[k], row.line) != expect)
          throw ParseError("row " + std::to_string(r + 1) +
                               " is out of order: arguments do not match its position",
                           row.line);
      }
      outputs.assign(bar + 1, row.tokens.end());
    }
    if (outputs.size() != tt.n)
      throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(outputs.size()) +
                           " outputs, expected " + std::to_string(tt.n),
                       row.line);
    auto& dst = tt.rows.emplace_back();
    for (const auto& t : outputs) dst.push_back(bit(t, row.line));
  }
  return tt;
}

void write_truth_table(std::ostream& out, const TruthTable& tt) {
  const std::size_t vars = tt.n + tt.m;
  out << "bcnq-truthtable 1\n"
      << "n " << tt.n << '\n'
      << "m " << tt.m << '\n'
      << "rows\n";
  for (std::size_t r = 0; r < tt.rows.size(); ++r) {
    for (std::size_t k = 0; k < vars; ++k) out << (((r >> (vars - 1 - k)) & 1U) == 0 ? 1 : 0) << ' ';
    out << '|';
    for (bool b : tt.rows[r]) out << ' ' << (b ? 1 : 0);
    out << '\n';
  }
}

// --- partition / classes --------------------------------------------------------

Partition read_partition(std::istream& in) {
  Document doc(in, "bcnq-partition");
  doc.allow_only({"states", "blocks"});
  const std::size_t n = doc.scalar("states");
  const auto& s = doc.get("blocks");
  if (s.values.size() != 1) throw ParseError("'blocks' takes exactly one value", s.line);
  const std::size_t count = Document::to_index(s.values[0], s.line);
  if (s.rows.size() != count)
    throw ParseError("declared " + std::to_string(count) + " blocks, found " +
                         std::to_string(s.rows.size()),
                     s.line);
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& r : s.rows) {
    auto& b = blocks.emplace_back();
    for (const auto& t : r.tokens) b.push_back(Document::to_index(t, r.line));
  }
  try {
    return Partition(n, std::move(blocks));
  } catch (const DimensionError& e) {
    throw ParseError(e.what(), s.line);
  }
}

void write_partition(std::ostream& out, const Partition& p) {
  out << "bcnq-partition 1\n"
      << "states " << p.n() << '\n'
      << "blocks " << p.size() << '\n';
  for (const auto& b : p.blocks()) write_row(out, b, 0, b.size());
}

ClassMatrix read_classes(std::istream& in) {
  Document doc(in, "bcnq-classes");
  doc.allow_only({"states", "classes"});
  const std::size_t n = doc.scalar("states");
  const auto& s = doc.get("classes");
  if (s.values.size() != 1) throw ParseError("'classes' takes exactly one value", s.line);
  const std::size_t k = Document::to_index(s.values[0], s.line);
  Section data = s;
  data.values.clear();
  auto idx = indices_in_range(data, n, k, "class");
  std::vector<bool> used(k, false);
  for (auto c : idx) used[c - 1] = true;
  for (std::size_t c = 0; c < k; ++c)
    if (!used[c]) throw ParseError("class " + std::to_string(c + 1) + " is empty", s.line);
  return ClassMatrix{LogicalMatrix(k, std::move(idx))};
}

void write_classes(std::ostream& out, const ClassMatrix& c) {
  out << "bcnq-classes 1\n"
      << "states " << c.n_states() << '\n'
      << "classes " << c.n_classes() << '\n';
  write_row(out, c.c.indices(), 0, c.n_states());
}

// --- cost -------------------------------------------------------------------------

CostSpec read_cost(std::istream& in) {
  Document doc(in, "bcnq-cost");
  doc.allow_only({"states", "inputs", "l", "g", "theta", "mu"});
  const std::size_t n = doc.scalar("states");
  const std::size_t m = doc.scalar("inputs");
  if (n == 0 || m == 0) throw ParseError("'states' and 'inputs' must be positive");
  CostSpec cost{RationalMatrix(m, n), {}, std::nullopt, std::nullopt};
  const auto l = rational_rows(doc.get("l"), m, n);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t x = 0; x < n; ++x) cost.l(u, x) = l[u][x];
  cost.g = rational_rows(doc.get("g"), 1, n)[0];
  if (const auto* s = doc.find("theta")) {
    std::vector<Rational> theta;
    for (auto& row : rational_rows(*s, m, n)) theta.insert(theta.end(), row.begin(), row.end());
    cost.theta = std::move(theta);
  }
  if (const auto* s = doc.find("mu")) cost.mu = rational_rows(*s, 1, n)[0];
  try {
    cost.validate();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return cost;
}

void write_cost(std::ostream& out, const CostSpec& cost) {
  const std::size_t n = cost.n_states();
  const std::size_t m = cost.n_inputs();
  out << "bcnq-cost 1\n"
      << "states " << n << '\n'
      << "inputs " << m << '\n'
      << "l\n";
  for (std::size_t u = 1; u <= m; ++u) {
    std::vector<Rational> row;
    for (std::size_t x = 1; x <= n; ++x) row.push_back(cost.stage(u, x));
    write_rational_row(out, row);
  }
  out << "g\n";
  write_rational_row(out, cost.g);
  if (cost.theta) {
    out << "theta\n";
    for (std::size_t u = 0; u < m; ++u)
      write_rational_row(out, std::span<const Rational>(*cost.theta).subspan(u * n, n));
  }
  if (cost.mu) {
    out << "mu\n";
    write_rational_row(out, *cost.mu);
  }
}

// --- feedback ------------------------------------------------------------------------

FeedbackFile read_feedback(std::istream& in) {
  Document doc(in, "bcnq-feedback");
  doc.allow_only({"states", "inputs", "settling_bound", "feedback", "classes",
                  "quotient_feedback"});
  const std::size_t n = doc.scalar("states");
  const std::size_t m = doc.scalar("inputs");
  const std::size_t bound = doc.scalar("settling_bound");
  FeedbackFile f;
  f.feedback = StateFeedback{LogicalMatrix(m, indices_in_range(doc.get("feedback"), n, m, "input")),
                             bound};
  const auto* classes = doc.find("classes");
  const auto* qfb = doc.find("quotient_feedback");
  if ((classes == nullptr) != (qfb == nullptr))
    throw ParseError("'classes' and 'quotient_feedback' must appear together");
  if (classes) {
    if (classes->values.size() != 1)
      throw ParseError("'classes' takes exactly one value (the class count)", classes->line);
    const std::size_t k = Document::to_index(classes->values[0], classes->line);
    Section data = *classes;
    data.values.clear();
    f.classes = ClassMatrix{LogicalMatrix(k, indices_in_range(data, n, k, "class"))};
    f.quotient_feedback =
        StateFeedback{LogicalMatrix(m, indices_in_range(*qfb, k, m, "input")), bound};
    if (lift_feedback(*f.quotient_feedback, *f.classes).k != f.feedback.k)
      throw ParseError("'feedback' is not the lift of 'quotient_feedback'", qfb->line);
  }
  return f;
}

void write_feedback(std::ostream& out, const FeedbackFile& f) {
  const auto& k = f.feedback.k;
  out << "bcnq-feedback 1\n"
      << "states " << k.cols() << '\n'
      << "inputs " << k.rows() << '\n'
      << "settling_bound " << f.feedback.settling_bound << '\n';
  if (f.classes && f.quotient_feedback) {
    out << "classes " << f.classes->n_classes() << '\n';
    write_row(out, f.classes->c.indices(), 0, f.classes->n_states());
    out << "quotient_feedback\n";
    write_row(out, f.quotient_feedback->k.indices(), 0, f.quotient_feedback->k.cols());
  }
  out << "feedback\n";
  write_row(out, k.indices(), 0, k.cols());
}

// --- solution ------------------------------------------------------------------------

SolutionFile read_solution(std::istream& in) {
  Document doc(in, "bcnq-solution");
  doc.allow_only({"states", "inputs", "horizon", "x0", "quotient_x0", "cost", "controls",
                  "values"});
  SolutionFile s;
  const std::size_t n = doc.scalar("states");
  const std::size_t m = doc.scalar("inputs");
  const std::size_t horizon = doc.scalar("horizon");
  s.n_inputs = m;
  s.x0 = doc.scalar("x0");
  if (doc.find("quotient_x0")) s.quotient_x0 = doc.scalar("quotient_x0");
  const auto& cost = doc.get("cost");
  if (cost.values.size() != 1) throw ParseError("'cost' takes exactly one value", cost.line);
  s.solution.cost = parse_rational(cost.values[0]);
  s.solution.inputs = indices_in_range(doc.get("controls"), horizon, m, "input");
  for (auto& row : rational_rows(doc.get("values"), horizon + 1, n))
    s.solution.values.push_back(std::move(row));
  return s;
}

void write_solution(std::ostream& out, const SolutionFile& s) {
  const auto& sol = s.solution;
  const std::size_t n = sol.values.empty() ? 0 : sol.values.front().size();
  out << "bcnq-solution 1\n"
      << "states " << n << '\n'
      << "inputs " << s.n_inputs << '\n'
      << "horizon " << sol.inputs.size() << '\n'
      << "x0 " << s.x0 << '\n';
  if (s.quotient_x0) out << "quotient_x0 " << *s.quotient_x0 << '\n';
  out << "cost " << format_rational(sol.cost) << '\n' << "controls";
  for (auto u : sol.inputs) out << ' ' << u;
  out << "\nvalues\n";
  for (const auto& row : sol.values) write_rational_row(out, row);
}

// --- files ----------------------------------------------------------------------------

Bcn load_network(const std::filesystem::path& path) {
  return load_file<Bcn>(path, [](std::istream& in) { return read_network(in); });
}
TruthTable load_truth_table(const std::filesystem::path& path) {
  return load_file<TruthTable>(path, [](std::istream& in) { return read_truth_table(in); });
}
Partition load_partition(const std::filesystem::path& path) {
  return load_file<Partition>(path, [](std::istream& in) { return read_partition(in); });
}
CostSpec load_cost(const std::filesystem::path& path) {
  return load_file<CostSpec>(path, [](std::istream& in) { return read_cost(in); });
}
FeedbackFile load_feedback(const std::filesystem::path& path) {
  return load_file<FeedbackFile>(path, [](std::istream& in) { return read_feedback(in); });
}

} // namespace bcnq::io
