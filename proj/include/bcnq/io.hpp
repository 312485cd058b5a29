#ifndef BCNQ_IO_HPP
#define BCNQ_IO_HPP

// Line-oriented text formats. Every file starts with "<schema> 1". A line
// that starts with a lowercase key opens a section; the key's inline values
// follow on the same line and its data rows on the lines below. Blank lines
// and '#' comments are ignored. All state/input/class indices are 1-based.
//
//   bcnq-network 1          bcnq-partition 1        bcnq-classes 1
//   states 8                states 8                states 8
//   inputs 2                blocks 4                classes 4
//   columns                 1                       1 2 2 3 4 4 4 4
//   2 1 1 5 6 7 8 5         2 3
//   1 1 1 8 6 7 8 7         4
//                           5 6 7 8
//
//   bcnq-truthtable 1       bcnq-cost 1             (rationals: 3, -1/2, 0.25)
//   n 3                     states 4
//   m 1                     inputs 2
//   rows                    l
//   1 1 1 1 | 1 1 0         1 2 2 2
//   ...                     3 3 3 3
//                           g
//                           1 1 1 2
//
// A truth-table row lists f_1..f_n, optionally preceded by the (u, x) values
// and a '|' separator, which are then checked against the row position.
// Cost files may add `theta` (M rows of N) and `mu` (one row) sections.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "bcnq/control.hpp"
#include "bcnq/network.hpp"
#include "bcnq/partition.hpp"

namespace bcnq::io {

Bcn read_network(std::istream& in);
void write_network(std::ostream& out, const Bcn& bcn);

TruthTable read_truth_table(std::istream& in);
void write_truth_table(std::ostream& out, const TruthTable& tt);

Partition read_partition(std::istream& in);
void write_partition(std::ostream& out, const Partition& p);

ClassMatrix read_classes(std::istream& in);
void write_classes(std::ostream& out, const ClassMatrix& c);

CostSpec read_cost(std::istream& in);
void write_cost(std::ostream& out, const CostSpec& cost);

/// Feedback on the original states, optionally with the quotient feedback
/// and class assignment it was lifted from.
struct FeedbackFile {
  StateFeedback feedback;
  std::optional<ClassMatrix> classes;
  std::optional<StateFeedback> quotient_feedback;
};
FeedbackFile read_feedback(std::istream& in);
void write_feedback(std::ostream& out, const FeedbackFile& f);

/// Optimal-control result. `values` are over the system the program was
/// solved on (the quotient when `quotient_x0` is set).
struct SolutionFile {
  std::size_t n_inputs = 0;
  std::size_t x0 = 0;
  std::optional<std::size_t> quotient_x0;
  OptimalSolution solution;
};
SolutionFile read_solution(std::istream& in);
void write_solution(std::ostream& out, const SolutionFile& s);

Rational parse_rational(const std::string& token);
std::string format_rational(const Rational& r);

Bcn load_network(const std::filesystem::path& path);
TruthTable load_truth_table(const std::filesystem::path& path);
Partition load_partition(const std::filesystem::path& path);
CostSpec load_cost(const std::filesystem::path& path);
FeedbackFile load_feedback(const std::filesystem::path& path);

} // namespace bcnq::io

#endif
