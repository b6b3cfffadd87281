#pragma once

#include "blochcert/derivatives.hpp"

#include <optional>
#include <string>
#include <vector>

namespace blochcert {

struct KnownValue {
  double value = 0.0;
  std::string derivation;
};

struct CorpusEntry {
  MappingUnderTest mapping;
  std::optional<KnownValue> known_bloch;  // for the recommended weights
  std::string weight;                      // recommended omega spec
  std::string coweight;                    // recommended co-weight spec
  std::string psi;                         // recommended admissible function label
  std::string notes;
};

// Labels in registry order.
std::vector<std::string> corpus_list();

// Throws InvalidArgument for unknown labels.
CorpusEntry corpus_get(const std::string& label);

}  // namespace blochcert
