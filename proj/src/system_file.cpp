#include "fbk/system_file.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fbk {
namespace {

using nlohmann::json;

// Byte offsets of every value in a syntactically valid JSON text, keyed by
// JSON pointer. Also reports the first duplicated object key.
class PositionIndex {
 public:
  explicit PositionIndex(const std::string& text) : text_(text) {
    skip_ws();
    value("");
  }

  std::size_t offset(const std::string& pointer) const {
    // Fall back to the closest recorded ancestor.
    std::string p = pointer;
    for (;;) {
      if (auto it = offsets_.find(p); it != offsets_.end()) return it->second;
      const auto slash = p.rfind('/');
      if (slash == std::string::npos) return 0;
      p.resize(slash);
    }
  }

  const std::optional<std::pair<std::string, std::size_t>>& duplicate() const { return duplicate_; }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string string() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') out += text_[pos_++];
      out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (const char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void value(const std::string& pointer) {
    offsets_[pointer] = pos_;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      std::map<std::string, bool> keys;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::size_t key_pos = pos_;
        const std::string key = string();
        if (!keys.emplace(key, true).second && !duplicate_) duplicate_ = {{key, key_pos}};
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(pointer + "/" + escape(key));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      for (std::size_t i = 0; pos_ < text_.size() && text_[pos_] != ']'; ++i) {
        value(pointer + "/" + std::to_string(i));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string();
    } else {
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != ',' &&
             text_[pos_] != ']' && text_[pos_] != '}') {
        ++pos_;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> offsets_;
  std::optional<std::pair<std::string, std::size_t>> duplicate_;
};

std::string location(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)), index_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    throw ParseError(source_ + ":" + location(text_, index_.offset(pointer)) + ": " + what);
  }

  const PositionIndex& index() const { return index_; }

  const json& field(const json& obj, const std::string& pointer, const std::string& key) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(pointer, "missing field \"" + key + "\"");
    return *it;
  }

  std::size_t count(const json& obj, const std::string& pointer, const std::string& key) const {
    const json& v = field(obj, pointer, key);
    if (!v.is_number_unsigned()) fail(pointer + "/" + key, "\"" + key + "\" must be a non-negative integer");
    return v.get<std::size_t>();
  }

  std::string text_field(const json& obj, const std::string& pointer, const std::string& key) const {
    const json& v = field(obj, pointer, key);
    if (!v.is_string()) fail(pointer + "/" + key, "\"" + key + "\" must be a string");
    return v.get<std::string>();
  }

  RingMatrix entries(const Ring& ring, const json& list, const std::string& pointer, std::size_t rows,
                     std::size_t cols) const {
    if (!list.is_array()) fail(pointer, "expected a list of element literals");
    if (list.size() != rows * cols) {
      fail(pointer, "expected " + std::to_string(rows * cols) + " entries for a " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " matrix, found " + std::to_string(list.size()));
    }
    std::vector<RingElement> values;
    values.reserve(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = pointer + "/" + std::to_string(i);
      std::string literal;
      if (list[i].is_string()) {
        literal = list[i].get<std::string>();
      } else if (list[i].is_number_integer()) {
        literal = list[i].dump();
      } else {
        fail(at, "element literals must be strings or integers");
      }
      try {
        values.push_back(RingElement::parse(ring, literal));
      } catch (const Error& e) {
        fail(at, std::string("bad element \"") + literal + "\": " + e.what());
      }
    }
    return RingMatrix::from_entries(ring, rows, cols, std::move(values));
  }

  RingMatrix matrix(const Ring& ring, const json& obj, const std::string& pointer) const {
    const std::size_t rows = count(obj, pointer, "rows");
    const std::size_t cols = count(obj, pointer, "cols");
    return entries(ring, field(obj, pointer, "entries"), pointer + "/entries", rows, cols);
  }

 private:
  const std::string& text_;
  std::string source_;
  PositionIndex index_;
};

Ring parse_ring(const Reader& r, const json& doc) {
  const json& block = r.field(doc, "", "ring");
  const std::string kind = r.text_field(block, "/ring", "kind");
  try {
    if (kind == "Q") return RingDescriptor::rationals();
    if (kind == "Z") return RingDescriptor::integers();
    if (kind == "GF") return RingDescriptor::prime_field(r.count(block, "/ring", "p"));
    if (kind == "PolyQuotient") {
      const json& vars = r.field(block, "/ring", "vars");
      if (!vars.is_array()) r.fail("/ring/vars", "\"vars\" must be a list of names");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!vars[i].is_string()) r.fail("/ring/vars/" + std::to_string(i), "variable names must be strings");
        names.push_back(vars[i].get<std::string>());
      }
      const std::string relation = r.text_field(block, "/ring", "relation");
      try {
        return RingDescriptor::poly_quotient(std::move(names), relation);
      } catch (const Error& e) {
        r.fail("/ring/relation", e.what());
      }
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    r.fail("/ring", e.what());
  }
  r.fail("/ring/kind", "unknown ring kind \"" + kind + "\"");
}

json matrix_json(const RingMatrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.literals()}};
}

json ring_block(const Ring& ring) {
  switch (ring->kind()) {
    case RingKind::Rationals:
      return json{{"kind", "Q"}};
    case RingKind::Integers:
      return json{{"kind", "Z"}};
    case RingKind::PrimeField:
      return json{{"kind", "GF"}, {"p", ring->prime()}};
    case RingKind::PolyQuotient:
      return json{{"kind", "PolyQuotient"}, {"vars", ring->vars()}, {"relation", ring->relation().to_string(ring->vars())}};
  }
  return {};
}

}  // namespace

const LinearSystem& SystemFile::system(const std::string& name) const {
  auto it = systems.find(name);
  if (it == systems.end()) throw Error("no system named \"" + name + "\"");
  return it->second;
}

const NamedCertificate& SystemFile::certificate(const std::string& name) const {
  auto it = certificates.find(name);
  if (it == certificates.end()) throw Error("no certificate named \"" + name + "\"");
  return it->second;
}

SystemFile parse_system_text(const std::string& text, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(source_name + ":" + location(text, at) + ": invalid JSON (" + e.what() + ")");
  }
  const Reader r(text, source_name);
  if (const auto& dup = r.index().duplicate()) {
    throw ParseError(source_name + ":" + location(text, dup->second) + ": duplicate key \"" + dup->first + "\"");
  }
  if (!doc.is_object()) r.fail("", "top level must be an object");

  SystemFile file;
  file.ring = parse_ring(r, doc);

  const json& systems = r.field(doc, "", "systems");
  if (!systems.is_object()) r.fail("/systems", "\"systems\" must be an object");
  for (const auto& [name, spec] : systems.items()) {
    const std::string at = "/systems/" + name;
    const std::size_t n = r.count(spec, at, "n");
    const std::size_t m = r.count(spec, at, "m");
    RingMatrix endo = r.entries(file.ring, r.field(spec, at, "endo"), at + "/endo", n, n);
    RingMatrix gens = r.entries(file.ring, r.field(spec, at, "input_gens"), at + "/input_gens", n, m);
    file.systems.emplace(name, LinearSystem::from_pair(endo, gens));
  }

  if (auto it = doc.find("certificates"); it != doc.end()) {
    if (!it->is_object()) r.fail("/certificates", "\"certificates\" must be an object");
    for (const auto& [name, spec] : it->items()) {
      const std::string at = "/certificates/" + name;
      std::string source = r.text_field(spec, at, "source");
      std::string target = r.text_field(spec, at, "target");
      if (!file.systems.count(source)) r.fail(at + "/source", "unknown system \"" + source + "\"");
      if (!file.systems.count(target)) r.fail(at + "/target", "unknown system \"" + target + "\"");
      const auto mat = [&](const char* key) { return r.matrix(file.ring, r.field(spec, at, key), at + "/" + key); };
      file.certificates.emplace(
          name, NamedCertificate{std::move(source), std::move(target),
                                 IsoCertificate{mat("phi"), mat("psi"), mat("U"), mat("V"), mat("Kw")}});
    }
  }
  return file;
}

SystemFile parse_system_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_system_text(buffer.str(), path.string());
}

std::string emit_system_file(const SystemFile& file) {
  json doc;
  doc["ring"] = ring_block(file.ring);
  doc["systems"] = json::object();
  for (const auto& [name, sigma] : file.systems) {
    doc["systems"][name] = json{{"n", sigma.state_rank()},
                                {"endo", sigma.endo().literals()},
                                {"m", sigma.input_gens().cols()},
                                {"input_gens", sigma.input_gens().literals()}};
  }
  if (!file.certificates.empty()) {
    json certs = json::object();
    for (const auto& [name, entry] : file.certificates) {
      certs[name] = json{{"source", entry.source},
                         {"target", entry.target},
                         {"phi", matrix_json(entry.cert.phi)},
                         {"psi", matrix_json(entry.cert.psi)},
                         {"U", matrix_json(entry.cert.u)},
                         {"V", matrix_json(entry.cert.v)},
                         {"Kw", matrix_json(entry.cert.kw)}};
    }
    doc["certificates"] = std::move(certs);
  }
  return doc.dump(2) + "\n";
}

}  // namespace fbk
