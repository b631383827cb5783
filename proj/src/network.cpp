#include "ccn/network.hpp"

#include "ccn/errors.hpp"
#include "ccn/monoid.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace ccn {

Network::Network(int n_cells, std::vector<Arrow> arrows)
    : n_cells_(n_cells), arrows_(std::move(arrows)) {
  if (n_cells_ < 1) throw ModelError("a network needs at least one cell");
  if (arrows_.empty()) throw ModelError("a network needs at least the identity arrow");
  for (const auto& a : arrows_)
    if (a.map.size() != n_cells_)
      throw ModelError("arrow '" + a.name + "' does not act on " + std::to_string(n_cells_) + " cells");
  if (!arrows_.front().map.is_identity())
    throw ModelError("missing identity arrow: the first arrow must be the identity map");
}

namespace {

struct MapLine {
  std::string keyword;
  std::string name;
  std::vector<int> values;  // as written, 1-based
  int line = 0;
  std::vector<int> value_columns;
};

struct MapFile {
  int n_cells = 0;
  std::vector<MapLine> lines;
};

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  int column() const { return static_cast<int>(pos_) + 1; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column(), what); }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
          static_cast<unsigned char>(c) >= 0x80)
        ++pos_;
      else
        break;
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }
  long integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a positive integer");
    if (pos_ - start > 9) fail("integer too large");
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::vector<std::pair<int, std::string_view>> significant_lines(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> out;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t") != std::string_view::npos) out.emplace_back(number, line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

MapFile parse_map_file(std::string_view text, std::string_view keyword) {
  MapFile file;
  const auto lines = significant_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty input: expected 'cells = <n>'");

  {
    LineCursor cur(lines.front().second, lines.front().first);
    if (cur.word() != "cells") cur.fail("expected 'cells = <n>' header");
    cur.expect('=');
    const long n = cur.integer();
    if (n < 1) cur.fail("cell count must be positive");
    if (!cur.at_end()) cur.fail("unexpected trailing text");
    file.n_cells = static_cast<int>(n);
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    LineCursor cur(lines[i].second, lines[i].first);
    MapLine ml;
    ml.line = lines[i].first;
    ml.keyword = cur.word();
    if (ml.keyword != keyword) cur.fail("expected '" + std::string(keyword) + "', found '" + ml.keyword + "'");
    ml.name = cur.word();
    cur.expect('=');
    cur.expect('(');
    do {
      cur.skip_ws();
      const int col = cur.column();
      const long v = cur.integer();
      if (v < 1 || v > file.n_cells)
        throw ParseError(ml.line, col,
                         "cell index " + std::to_string(v) + " out of range 1.." + std::to_string(file.n_cells));
      ml.values.push_back(static_cast<int>(v));
      ml.value_columns.push_back(col);
    } while (cur.accept(','));
    cur.expect(')');
    if (!cur.at_end()) cur.fail("unexpected trailing text");
    if (static_cast<int>(ml.values.size()) != file.n_cells)
      throw ParseError(ml.line, 1,
                       "'" + ml.name + "' lists " + std::to_string(ml.values.size()) + " entries, expected " +
                           std::to_string(file.n_cells));
    file.lines.push_back(std::move(ml));
  }
  return file;
}

CellMap to_cell_map(const std::vector<int>& one_based) {
  std::vector<int> image;
  image.reserve(one_based.size());
  for (int v : one_based) image.push_back(v - 1);
  return CellMap(std::move(image));
}

std::string map_line(std::string_view keyword, const std::string& name, const CellMap& m) {
  return std::string(keyword) + " " + name + " = " + m.to_string() + "\n";
}

}  // namespace

Network parse_network(std::string_view text) {
  MapFile file = parse_map_file(text, "arrow");
  if (file.lines.empty()) throw ParseError(1, 1, "missing identity arrow: no arrows given");
  std::vector<Arrow> arrows;
  for (const auto& ml : file.lines) arrows.push_back({ml.name, to_cell_map(ml.values)});
  if (!arrows.front().map.is_identity())
    throw ParseError(file.lines.front().line, 1, "missing identity arrow: the first arrow must be the identity map");
  return Network(file.n_cells, std::move(arrows));
}

GeneratorSet parse_generators(std::string_view text) {
  MapFile file = parse_map_file(text, "generator");
  GeneratorSet gens;
  gens.n_cells = file.n_cells;
  for (const auto& ml : file.lines) {
    gens.names.push_back(ml.name);
    gens.maps.push_back(to_cell_map(ml.values));
  }
  return gens;
}

std::string serialize_network(const Network& net) {
  std::string out = "cells = " + std::to_string(net.n_cells()) + "\n";
  for (const auto& a : net.arrows()) out += map_line("arrow", a.name, a.map);
  return out;
}

std::string serialize_generators(const GeneratorSet& gens) {
  std::string out = "cells = " + std::to_string(gens.n_cells) + "\n";
  for (std::size_t i = 0; i < gens.maps.size(); ++i) out += map_line("generator", gens.names[i], gens.maps[i]);
  return out;
}

InputKind detect_input_kind(std::string_view text) {
  const auto lines = significant_lines(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view l = lines[i].second;
    l.remove_prefix(std::min(l.find_first_not_of(" \t"), l.size()));
    if (l.starts_with("generator")) return InputKind::Generators;
    if (l.starts_with("arrow")) return InputKind::Network;
  }
  return InputKind::Network;
}

std::vector<CellMap> input_maps(const Network& net) {
  std::vector<CellMap> maps;
  maps.reserve(net.arrows().size());
  for (const auto& a : net.arrows()) maps.push_back(a.map);
  return maps;
}

SelfFundamentalReport check_self_fundamental(const Network& net) {
  SelfFundamentalReport report;
  const auto maps = input_maps(net);
  report.has_identity = std::any_of(maps.begin(), maps.end(), [](const CellMap& m) { return m.is_identity(); });

  std::map<CellMap, int> index;
  for (std::size_t k = 0; k < maps.size(); ++k) index.emplace(maps[k], static_cast<int>(k));

  const std::size_t count = maps.size();
  std::vector<std::vector<int>> table(count, std::vector<int>(count, -1));
  for (std::size_t p = 0; p < count; ++p)
    for (std::size_t q = 0; q < count; ++q) {
      auto it = index.find(maps[p].then(maps[q]));
      if (it == index.end()) {
        report.violation = std::make_pair(static_cast<int>(p), static_cast<int>(q));
        return report;
      }
      table[p][q] = it->second;
    }
  report.closed = report.has_identity;
  if (report.closed) report.table = std::move(table);
  return report;
}

std::optional<GeneratorSet> hidden_symmetries(const Network& net) {
  const auto report = check_self_fundamental(net);
  if (!report.closed) return std::nullopt;
  const int n = net.n_cells();
  if (net.n_arrows() != n) return std::nullopt;
  const auto maps = input_maps(net);

  for (int base = 0; base < n; ++base) {
    // arrow_of_cell[c] = k with arrow_k(base) = c
    std::vector<int> arrow_of_cell(static_cast<std::size_t>(n), -1);
    bool bijective = true;
    for (int k = 0; k < n && bijective; ++k) {
      int& slot = arrow_of_cell[static_cast<std::size_t>(maps[k](base))];
      if (slot >= 0) bijective = false;
      slot = k;
    }
    if (!bijective) continue;

    std::vector<CellMap> rows;
    for (int i = 0; i < n; ++i) {
      std::vector<int> image(static_cast<std::size_t>(n));
      for (int c = 0; c < n; ++c) image[static_cast<std::size_t>(c)] = maps[arrow_of_cell[c]](i);
      rows.emplace_back(std::move(image));
    }
    bool commutes = true;
    for (const auto& r : rows)
      for (const auto& a : maps)
        if (r.then(a) != a.then(r)) commutes = false;
    if (!commutes) continue;

    // Greedy minimal generating subset in cell order.
    GeneratorSet gens;
    gens.n_cells = n;
    std::set<CellMap> reached{CellMap::identity(n)};
    for (int i = 0; i < n; ++i) {
      if (reached.count(rows[i])) continue;
      gens.names.push_back("s" + std::to_string(i + 1));
      gens.maps.push_back(rows[i]);
      const Monoid m = close_monoid(gens.maps);
      reached = std::set<CellMap>(m.elements.begin(), m.elements.end());
    }
    return gens;
  }
  return std::nullopt;
}

}  // namespace ccn
