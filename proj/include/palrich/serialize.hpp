#pragma once

#include <string>

#include "json.hpp"
#include "palrich/transfer.hpp"

namespace palrich {

using ordered_json = nlohmann::ordered_json;

/// Stable-field-order JSON rendering of a certificate:
/// {subject, kind, evidence{...}, verdict, caveats[]}.
inline ordered_json certificate_to_json(const Certificate& cert, const std::string& sep = "") {
  ordered_json j;
  j["subject"] = format_morphism(cert.subject, sep);
  j["kind"] = cert.kind == Certificate::Kind::BinaryPretCriterion ? "binary_pret_criterion"
                                                                  : "arnoux_rauzy_expression";
  ordered_json evidence;
  if (cert.kind == Certificate::Kind::BinaryPretCriterion) {
    evidence["phi_R"] = cert.phi_r ? format_morphism(*cert.phi_r, sep) : "";
    evidence["marker"] = cert.marker ? cert.marker->str(sep) : "";
    evidence["test_word"] = cert.test_word ? cert.test_word->str(sep) : "";
    evidence["test_word_rich"] = cert.test_report ? cert.test_report->rich : false;
  } else {
    evidence["expression"] = cert.expression ? cert.expression->str() : "";
  }
  j["evidence"] = std::move(evidence);
  j["verdict"] = cert.verdict;
  j["caveats"] = cert.caveats;
  return j;
}

inline ordered_json richness_report_to_json(const RichnessReport& rep) {
  ordered_json j;
  j["length"] = rep.length;
  j["palindromes"] = rep.palindromes;
  j["defect"] = rep.defect;
  j["rich"] = rep.rich;
  if (rep.first_violation)
    j["first_ju_violation"] = *rep.first_violation;
  else
    j["first_ju_violation"] = nullptr;
  return j;
}

}  // namespace palrich
