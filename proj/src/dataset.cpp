#include "levelbn/dataset.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "levelbn/errors.hpp"

namespace levelbn {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
}

template <typename T>
void fnv_value(std::uint64_t& h, T v) {
  fnv_bytes(h, &v, sizeof(v));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record; double quotes group commas and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.emplace_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  fields.emplace_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

std::optional<std::uint64_t> parse_code(const std::string& token) {
  std::uint64_t v = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || token.empty()) return std::nullopt;
  return v;
}

std::string where(std::size_t line, const std::string& column) {
  return "row " + std::to_string(line) + ", column '" + column + "'";
}

std::map<std::string, int> read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IngestError("sidecar " + path.string() + ": " + e.what());
  }
  const nlohmann::json& table = j.contains("arities") ? j.at("arities") : j;
  if (!table.is_object()) throw IngestError("sidecar " + path.string() + ": expected an object of arities");
  std::map<std::string, int> out;
  for (const auto& [name, value] : table.items()) {
    if (!value.is_number_integer()) {
      throw IngestError("sidecar " + path.string() + ": arity of '" + name + "' is not an integer");
    }
    out[name] = value.get<int>();
  }
  return out;
}

Dataset build_dataset(std::string_view text, const LoadOptions& options,
                      const std::map<std::string, int>& sidecar) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> line_numbers;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (trim(line).empty()) continue;
    records.push_back(split_record(line));
    line_numbers.push_back(line_no);
  }
  if (records.empty()) throw IngestError("empty input: no header row");
  const std::vector<std::string> header = records.front();
  if (records.size() < 2) throw IngestError("no data rows after the header");

  std::set<std::string> seen;
  for (const auto& name : header) {
    if (name.empty()) throw IngestError("header has an empty variable name");
    if (!seen.insert(name).second) throw IngestError("duplicate variable name '" + name + "' in header");
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw IngestError("row " + std::to_string(line_numbers[r]) + " has " + std::to_string(records[r].size()) +
                        " fields, header has " + std::to_string(header.size()));
    }
  }

  std::vector<int> selected;
  if (!options.columns.empty()) {
    for (const auto& name : options.columns) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw IngestError("unknown column '" + name + "'");
      selected.push_back(static_cast<int>(it - header.begin()));
    }
  } else {
    int count = static_cast<int>(header.size());
    if (options.first_columns > 0) count = std::min(count, options.first_columns);
    for (int j = 0; j < count; ++j) selected.push_back(j);
  }

  std::map<std::string, int> declared = sidecar;
  for (const auto& [name, a] : options.declared_arities) declared[name] = a;
  for (const auto& [name, a] : declared) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw IngestError("declared arity for unknown variable '" + name + "'");
    }
    if (a < 1) throw IngestError("declared arity of '" + name + "' must be >= 1");
  }

  const std::size_t n = records.size() - 1;
  std::vector<VariableMeta> meta;
  std::vector<std::vector<std::uint32_t>> columns;
  for (int j : selected) {
    const std::string& name = header[static_cast<std::size_t>(j)];
    const auto decl = declared.find(name);
    const std::optional<int> declared_arity =
        decl == declared.end() ? std::nullopt : std::optional<int>(decl->second);

    bool integer_column = true;
    std::vector<std::uint64_t> ints(n);
    for (std::size_t r = 0; r < n; ++r) {
      const std::string& tok = records[r + 1][static_cast<std::size_t>(j)];
      if (tok.empty()) throw IngestError("missing value at " + where(line_numbers[r + 1], name));
      if (integer_column) {
        auto v = parse_code(tok);
        if (v) ints[r] = *v;
        else integer_column = false;
      }
    }

    VariableMeta vm;
    vm.name = name;
    std::vector<std::uint32_t> codes(n);
    if (integer_column && declared_arity) {
      // Integer codes are taken literally against a declared domain.
      for (std::size_t r = 0; r < n; ++r) {
        if (ints[r] >= static_cast<std::uint64_t>(*declared_arity)) {
          throw IngestError("code " + std::to_string(ints[r]) + " at " + where(line_numbers[r + 1], name) +
                            " exceeds declared arity " + std::to_string(*declared_arity));
        }
        codes[r] = static_cast<std::uint32_t>(ints[r]);
      }
      vm.arity = *declared_arity;
      for (int c = 0; c < vm.arity; ++c) vm.labels.push_back(std::to_string(c));
    } else if (integer_column) {
      // Observed integers are compacted to 0..d-1 in ascending numeric order.
      std::vector<std::uint64_t> distinct(ints);
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (std::size_t r = 0; r < n; ++r) {
        codes[r] = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), ints[r]) -
                                              distinct.begin());
      }
      vm.arity = static_cast<int>(distinct.size());
      for (auto v : distinct) vm.labels.push_back(std::to_string(v));
    } else {
      std::unordered_map<std::string, std::uint32_t> index;
      for (std::size_t r = 0; r < n; ++r) {
        const std::string& tok = records[r + 1][static_cast<std::size_t>(j)];
        auto [it, inserted] = index.emplace(tok, static_cast<std::uint32_t>(vm.labels.size()));
        if (inserted) vm.labels.push_back(tok);
        codes[r] = it->second;
        if (declared_arity && it->second >= static_cast<std::uint32_t>(*declared_arity)) {
          throw IngestError("value '" + tok + "' at " + where(line_numbers[r + 1], name) +
                            " exceeds declared arity " + std::to_string(*declared_arity));
        }
      }
      vm.arity = declared_arity.value_or(static_cast<int>(vm.labels.size()));
      for (int c = static_cast<int>(vm.labels.size()); c < vm.arity; ++c) vm.labels.push_back("#" + std::to_string(c));
    }
    meta.push_back(std::move(vm));
    columns.push_back(std::move(codes));
  }
  try {
    return Dataset(std::move(meta), std::move(columns));
  } catch (const ParameterError& e) {
    throw IngestError(e.what());
  }
}

}  // namespace

Dataset::Dataset(std::vector<VariableMeta> meta, std::vector<std::vector<std::uint32_t>> columns)
    : meta_(std::move(meta)) {
  if (meta_.empty() || static_cast<int>(meta_.size()) > kMaxVariables) {
    throw ParameterError("dataset must have between 1 and " + std::to_string(kMaxVariables) +
                         " variables, got " + std::to_string(meta_.size()));
  }
  if (columns.size() != meta_.size()) throw ParameterError("column count does not match variable metadata");
  const std::size_t rows = columns.front().size();
  if (rows == 0) throw ParameterError("dataset must have at least one row");
  if (rows > static_cast<std::size_t>(std::numeric_limits<int>::max())) throw ParameterError("too many rows");
  n_ = static_cast<int>(rows);
  std::set<std::string> names;
  cells_.reserve(rows * meta_.size());
  for (std::size_t j = 0; j < meta_.size(); ++j) {
    VariableMeta& vm = meta_[j];
    if (vm.arity < 1) throw ParameterError("variable '" + vm.name + "' has arity < 1");
    if (!names.insert(vm.name).second) throw ParameterError("duplicate variable name '" + vm.name + "'");
    if (columns[j].size() != rows) throw ParameterError("column '" + vm.name + "' has a different length");
    for (std::size_t i = 0; i < rows; ++i) {
      if (columns[j][i] >= static_cast<std::uint32_t>(vm.arity)) {
        throw ParameterError("code " + std::to_string(columns[j][i]) + " at row " + std::to_string(i) +
                             ", column '" + vm.name + "' is not below arity " + std::to_string(vm.arity));
      }
    }
    while (static_cast<int>(vm.labels.size()) < vm.arity) vm.labels.push_back(std::to_string(vm.labels.size()));
    vm.labels.resize(static_cast<std::size_t>(vm.arity));
    cells_.insert(cells_.end(), columns[j].begin(), columns[j].end());
  }
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(meta_.size());
  for (const auto& m : meta_) out.push_back(m.name);
  return out;
}

std::optional<int> Dataset::index_of(std::string_view name) const {
  for (std::size_t j = 0; j < meta_.size(); ++j) {
    if (meta_[j].name == name) return static_cast<int>(j);
  }
  return std::nullopt;
}

Dataset Dataset::select(std::span<const int> cols) const {
  std::vector<VariableMeta> meta;
  std::vector<std::vector<std::uint32_t>> columns;
  for (int j : cols) {
    if (j < 0 || j >= p()) throw ParameterError("select: column " + std::to_string(j) + " out of range");
    meta.push_back(meta_[static_cast<std::size_t>(j)]);
    auto c = column(j);
    columns.emplace_back(c.begin(), c.end());
  }
  return Dataset(std::move(meta), std::move(columns));
}

Dataset Dataset::permute_rows(std::span<const std::size_t> perm) const {
  if (perm.size() != static_cast<std::size_t>(n_)) throw ParameterError("permute_rows: wrong permutation length");
  std::vector<std::vector<std::uint32_t>> columns(meta_.size());
  for (int j = 0; j < p(); ++j) {
    auto c = column(j);
    auto& out = columns[static_cast<std::size_t>(j)];
    out.reserve(perm.size());
    for (std::size_t i : perm) out.push_back(c[i]);
  }
  return Dataset(meta_, std::move(columns));
}

std::uint64_t Dataset::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  fnv_value(h, static_cast<std::uint32_t>(n_));
  fnv_value(h, static_cast<std::uint32_t>(meta_.size()));
  for (const auto& m : meta_) {
    fnv_bytes(h, m.name.data(), m.name.size());
    fnv_value(h, static_cast<std::uint32_t>(m.arity));
  }
  fnv_bytes(h, cells_.data(), cells_.size() * sizeof(std::uint32_t));
  return h;
}

std::uint64_t ContingencyCounts::total() const noexcept {
  std::uint64_t t = 0;
  for (const auto& e : entries) t += e.second;
  return t;
}

std::uint64_t ContingencyCounts::count(std::uint64_t code) const noexcept {
  auto it = std::lower_bound(entries.begin(), entries.end(), code,
                             [](const auto& e, std::uint64_t c) { return e.first < c; });
  return it != entries.end() && it->first == code ? it->second : 0;
}

double CountingWorkspace::encode(const Dataset& d, VarSet s) {
  const auto n = static_cast<std::size_t>(d.n());
  codes_.resize(n);
  code_space_ = 1;
  mixed_radix_ = true;
  double sigma = 1.0;
  bool first = true;
  s.for_each([&](int v) {
    const auto a = static_cast<std::uint64_t>(d.arity(v));
    sigma *= static_cast<double>(a);
    if (code_space_ > std::numeric_limits<std::uint64_t>::max() / a) compact();
    const auto col = d.column(v);
    if (first) {
      for (std::size_t i = 0; i < n; ++i) codes_[i] = col[i];
      first = false;
    } else {
      const std::uint64_t stride = code_space_;
      for (std::size_t i = 0; i < n; ++i) codes_[i] += col[i] * stride;
    }
    code_space_ *= a;
  });
  return sigma;
}

void CountingWorkspace::compact() {
  sorted_.assign(codes_.begin(), codes_.end());
  std::sort(sorted_.begin(), sorted_.end());
  sorted_.erase(std::unique(sorted_.begin(), sorted_.end()), sorted_.end());
  for (auto& c : codes_) {
    c = static_cast<std::uint64_t>(std::lower_bound(sorted_.begin(), sorted_.end(), c) - sorted_.begin());
  }
  code_space_ = sorted_.size();
  mixed_radix_ = false;
}

ContingencyCounts count_configurations(const Dataset& d, VarSet s) {
  if (s.empty()) throw ParameterError("count_configurations: empty subset");
  if (s.highest() >= d.p()) throw ParameterError("count_configurations: subset " + s.to_string() + " exceeds p");
  CountingWorkspace ws;
  ContingencyCounts out;
  out.subset = s;
  out.sigma = ws.for_each_count(d, s, [&](std::uint64_t code, std::uint64_t count) {
    out.entries.emplace_back(code, count);
  });
  out.mixed_radix = ws.last_mixed_radix();
  std::sort(out.entries.begin(), out.entries.end());
  return out;
}

Dataset parse_csv(std::string_view text, const LoadOptions& options) { return build_dataset(text, options, {}); }

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path out = csv_path;
  out.replace_extension(".meta.json");
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::map<std::string, int> sidecar;
  if (options.use_sidecar) sidecar = read_sidecar(sidecar_path(path));
  try {
    return build_dataset(buf.str(), options, sidecar);
  } catch (const IngestError& e) {
    throw IngestError(path.string() + ": " + e.what());
  }
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos && !s.empty() && s.front() != ' ' && s.back() != ' ') return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  for (int j = 0; j < d.p(); ++j) out << (j ? "," : "") << csv_field(d.variable(j).name);
  out << '\n';
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.p(); ++j) {
      out << (j ? "," : "") << csv_field(d.variable(j).labels[d.cell(i, j)]);
    }
    out << '\n';
  }
}

void write_sidecar(const Dataset& d, const std::filesystem::path& csv_path) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& v : d.variables()) j[v.name] = v.arity;
  std::ofstream out(sidecar_path(csv_path));
  if (!out) throw IngestError("cannot write " + sidecar_path(csv_path).string());
  out << j.dump(2) << '\n';
}

}  // namespace levelbn
