#pragma once

// Command-line front end. Exit codes: 0 success, 1 mathematical rejection
// (degenerate level, non-new form, route disagreement), 2 input or usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oldcong/arith.hpp"
#include "oldcong/congruence.hpp"
#include "oldcong/io.hpp"
#include "oldcong/modsym.hpp"
#include "oldcong/oldspace.hpp"

namespace oldcong::cli {

namespace detail {

inline void print_matrix_rows(std::ostream& out, const IntMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << "\n";
  }
}

inline CurveRecord read_curve(const std::string& path, std::ostream& err) {
  std::vector<std::string> warnings;
  CurveRecord c = load_curve(path, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return c;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Congruence primes between an elliptic-curve newform and the old space of S2(Gamma0(N))", "oldcong"};
  app.require_subcommand(1);

  u64 level = 0;
  std::optional<u64> prec;
  std::string curve_path, method_name = "smith", json_out;
  u64 prime = 0;

  auto* sturm = app.add_subcommand("sturm-bound", "Print the Sturm bound of Gamma0(N)");
  sturm->add_option("N", level, "Level")->required()->check(CLI::PositiveNumber);

  auto* basis = app.add_subcommand("basis", "Print an integral basis (HNF) of S2(Gamma0(N)) to precision B");
  basis->add_option("N", level, "Level")->required()->check(CLI::PositiveNumber);
  basis->add_option("--prec", prec, "Precision B (default: the Sturm bound)");

  auto* oldm = app.add_subcommand("oldspace-matrix", "Print the old-space matrix M with row provenance");
  oldm->add_option("N", level, "Level")->required()->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check-prime", "Is p a congruence prime between the curve's newform and the old space?");
  check->add_option("--curve", curve_path, "Curve JSON file")->required();
  check->add_option("-p", prime, "Prime")->required();

  auto* primes = app.add_subcommand("congruence-primes", "All congruence primes to the old space");
  primes->add_option("--curve", curve_path, "Curve JSON file")->required();
  primes->add_option("--method", method_name, "theorem3 | smith | both")
      ->check(CLI::IsMember({"theorem3", "smith", "both"}));
  primes->add_option("--json", json_out, "Also write the JSON report to this file ('-' for stdout)");

  auto* number = app.add_subcommand("congruence-number", "Print the saturation index of Z v(f) + sat(M)");
  number->add_option("--curve", curve_path, "Curve JSON file")->required();

  auto* conj = app.add_subcommand("check-conjecture1", "Check odd primes dividing the Tamagawa product");
  conj->add_option("--curve", curve_path, "Curve JSON file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (sturm->parsed()) {
      out << sturm_bound(Level(level)) << "\n";
    } else if (basis->parsed()) {
      const Level n(level);
      const IntMatrix b = integral_basis(n, prec.value_or(sturm_bound(n)));
      detail::print_matrix_rows(out, b);
    } else if (oldm->parsed()) {
      const OldspaceMatrix m = oldspace_matrix(Level(level));
      out << "# level " << level << ", precision " << m.precision << ", " << m.matrix.rows() << " rows\n";
      for (std::size_t i = 0; i < m.matrix.rows(); ++i) {
        out << "beta_" << m.provenance[i].degeneracy << " from " << m.provenance[i].source_level << ":";
        for (std::size_t j = 0; j < m.matrix.cols(); ++j) out << " " << m.matrix(i, j);
        out << "\n";
      }
    } else if (check->parsed()) {
      if (!is_prime(prime)) throw usage_error("-p " + std::to_string(prime) + " is not prime");
      const CurveRecord c = detail::read_curve(curve_path, err);
      if (genus_x0(c.level) == 0)
        throw math_error("level " + std::to_string(c.level.value()) + " has no cusp forms; no newform exists");
      const OldspaceMatrix m = oldspace_matrix(c.level);
      const CoeffVector vf = coefficient_vector(c, m.precision);
      const Membership mem = is_congruence_prime(vf, m, prime);
      out << (mem.member ? "yes" : "no") << "\n";
      if (mem.member) out << format_witness(prime, mem.witness->components, m) << "\n";
    } else if (primes->parsed()) {
      const CurveRecord c = detail::read_curve(curve_path, err);
      const OldspaceMatrix m = oldspace_matrix(c.level);
      const CongruenceReport r = congruence_primes(c, parse_method(method_name), &m);
      out << format_report(r, m);
      if (!json_out.empty()) {
        const std::string text = report_to_json(r).dump(2) + "\n";
        if (json_out == "-") {
          out << text;
        } else {
          std::ofstream f(json_out);
          if (!f) throw input_error("cannot write " + json_out);
          f << text;
        }
      }
    } else if (number->parsed()) {
      const CurveRecord c = detail::read_curve(curve_path, err);
      if (genus_x0(c.level) == 0)
        throw math_error("level " + std::to_string(c.level.value()) + " has no cusp forms; no newform exists");
      const OldspaceMatrix m = oldspace_matrix(c.level);
      out << candidate_primes_smith(coefficient_vector(c, m.precision), m).saturation_index << "\n";
    } else if (conj->parsed()) {
      const CurveRecord c = detail::read_curve(curve_path, err);
      if (!c.tamagawa || !c.torsion_order)
        throw input_error("check-conjecture1 needs both tamagawa and torsion_order in the curve record");
      const CongruenceReport r = congruence_primes(c, Method::smith);
      const auto verdicts = check_conjecture1(r, c);
      if (verdicts.empty()) out << "no odd prime divides the Tamagawa product\n";
      for (const auto& v : verdicts)
        out << "ell=" << v.ell << ": " << (v.consistent ? "consistent" : "COUNTEREXAMPLE") << " (" << v.reason
            << ")\n";
    }
  } catch (const math_error& e) {
    err << "rejected: " << e.what() << "\n";
    return 1;
  } catch (const usage_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const input_error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace oldcong::cli
