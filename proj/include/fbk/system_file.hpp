#pragma once

// JSON system files:
//   {
//     "ring": {"kind": "Q"} | {"kind": "GF", "p": 5} | {"kind": "Z"}
//           | {"kind": "PolyQuotient", "vars": ["x", "y"], "relation": "x^2 + y^2 - 1"},
//     "systems": {"S": {"n": 2, "endo": ["0", "0", "1", "0"], "m": 1, "input_gens": ["1", "0"]}},
//     "certificates": {"C": {"source": "S", "target": "T",
//                            "phi": {"rows": 2, "cols": 2, "entries": [...]}, "psi": ..., "U": ..., "V": ..., "Kw": ...}}
//   }
// Matrices are row-major lists of element literals. "certificates" is optional.

#include <filesystem>
#include <map>
#include <string>

#include "fbk/equivalence.hpp"

namespace fbk {

struct NamedCertificate {
  std::string source;
  std::string target;
  IsoCertificate cert;
};

struct SystemFile {
  Ring ring;
  std::map<std::string, LinearSystem> systems;
  std::map<std::string, NamedCertificate> certificates;

  /// Throws Error naming the missing entry.
  const LinearSystem& system(const std::string& name) const;
  const NamedCertificate& certificate(const std::string& name) const;
};

/// Diagnostics are ParseError messages of the form "<source>:<line>:<column>: <what>".
SystemFile parse_system_text(const std::string& text, const std::string& source_name = "<input>");
SystemFile parse_system_file(const std::filesystem::path& path);

/// Deterministic: keys sorted, two-space indentation, trailing newline.
std::string emit_system_file(const SystemFile& file);

}  // namespace fbk
