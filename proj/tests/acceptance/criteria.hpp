#pragma once

#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

namespace acceptance {

/// Verdict of one criterion plus the measurements behind it.
struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void note(const std::string& line) { notes.push_back(line); }
  /// Records a sub-check; any failing sub-check fails the criterion.
  void check(bool ok, const std::string& line) {
    pass = pass && ok;
    notes.push_back((ok ? "ok    " : "FAIL  ") + line);
  }
};

inline std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

/// Least-squares slope of log(error) against log(parameter).
double observed_order(const std::vector<double>& parameter, const std::vector<double>& error);

Outcome determinant_lemma();
Outcome det_M_closed_form();
Outcome admissibility_adjudication();
Outcome thermodynamic_consistency(const std::vector<int>& dims);
Outcome unit_constraint();
Outcome exact_subsystems();
Outcome besov_toolkit();
Outcome picard_contraction();
Outcome constitutive_identities();

}  // namespace acceptance
