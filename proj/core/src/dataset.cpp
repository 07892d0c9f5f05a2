#include "fairaudit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fairaudit {

int Schema::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return int(i);
  return -1;
}

const Schema::Column& Schema::column(const std::string& name) const {
  int i = column_index(name);
  if (i < 0) throw DataError("schema has no column named '" + name + "'");
  return columns[std::size_t(i)];
}

const std::vector<double>& Dataset::numeric_column(const std::string& name) const {
  int i = schema.column_index(name);
  if (i < 0 || schema.columns[std::size_t(i)].kind != ColumnKind::numeric)
    throw DataError("no numeric column named '" + name + "'");
  return numeric[slot[std::size_t(i)]];
}

const std::vector<std::int32_t>& Dataset::categorical_column(const std::string& name) const {
  int i = schema.column_index(name);
  if (i < 0 || schema.columns[std::size_t(i)].kind != ColumnKind::categorical)
    throw DataError("no categorical column named '" + name + "'");
  return categorical[slot[std::size_t(i)]];
}

const std::string& Dataset::category_of(std::size_t col_index, std::size_t row) const {
  const auto& col = schema.columns[col_index];
  return col.categories[std::size_t(categorical[slot[col_index]][row])];
}

Dataset Dataset::subset(const std::vector<std::size_t>& idx) const {
  Dataset out;
  out.schema = schema;
  out.slot = slot;
  out.numeric.resize(numeric.size());
  out.categorical.resize(categorical.size());
  for (std::size_t c = 0; c < numeric.size(); ++c) {
    out.numeric[c].reserve(idx.size());
    for (std::size_t i : idx) out.numeric[c].push_back(numeric[c][i]);
  }
  for (std::size_t c = 0; c < categorical.size(); ++c) {
    out.categorical[c].reserve(idx.size());
    for (std::size_t i : idx) out.categorical[c].push_back(categorical[c][i]);
  }
  out.y.reserve(idx.size());
  for (std::size_t i : idx) out.y.push_back(y[i]);
  return out;
}

RegisteredName registered_name_from(const std::string& s) {
  if (s == "adult") return RegisteredName::adult;
  if (s == "bank") return RegisteredName::bank;
  if (s == "utrecht") return RegisteredName::utrecht;
  throw ConfigError("unknown registered dataset '" + s + "' (expected adult, bank or utrecht)");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

/// Header names are matched case-insensitively with '.', '_' and ' ' folded
/// to '-', so "education.num", "education_num" and "Education-Num" all hit
/// the same registered column.
std::string norm_name(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '.' || c == '_' || c == ' ') {
      out.push_back('-');
    } else {
      out.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

std::vector<std::string> parse_csv_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      quoted = true;
      cur.clear();
    } else if (c == delim) {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

RawTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file '" + path + "'");
  RawTable t;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // The registered files are comma-separated; the public bank CSV ships with
  // ';', so the delimiter is sniffed from the header line.
  char delim = ',';
  if (std::count(line.begin(), line.end(), ';') > std::count(line.begin(), line.end(), ','))
    delim = ';';
  t.header = parse_csv_line(line, delim);
  std::size_t width = t.header.size();
  if (width < 2) throw DataError("CSV header of '" + path + "' has fewer than 2 columns");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = parse_csv_line(line, delim);
    if (fields.size() != width)
      throw DataError("CSV row " + std::to_string(lineno) + " of '" + path + "' has " +
                      std::to_string(fields.size()) + " fields, expected " + std::to_string(width));
    t.rows.push_back(std::move(fields));
  }
  if (t.rows.empty()) throw DataError("CSV file '" + path + "' has a header but no data rows");
  return t;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

struct RegistryColumn {
  std::string canonical;
  ColumnKind kind;
  std::vector<std::string> alternates;  // extra normalized header spellings
};

struct RegistrySpec {
  std::vector<RegistryColumn> columns;
  std::string label;
  std::vector<std::string> label_alternates;
  std::string favorable;
  std::string protected_attr;
  std::vector<std::string> privileged;
  bool adult_rules = false;      // dedup + "unknown" replacement
  bool derive_age_ge_25 = false; // bank privileged-group rule
};

const RegistrySpec& registry(RegisteredName name) {
  static const RegistrySpec adult{
      {{"age", ColumnKind::numeric, {}},
       {"workclass", ColumnKind::categorical, {}},
       {"fnlwgt", ColumnKind::numeric, {}},
       {"education", ColumnKind::categorical, {}},
       {"education-num", ColumnKind::numeric, {"educational-num"}},
       {"Marital-status", ColumnKind::categorical, {}},
       {"occupation", ColumnKind::categorical, {}},
       {"relationship", ColumnKind::categorical, {}},
       {"race", ColumnKind::categorical, {}},
       {"sex", ColumnKind::categorical, {"gender"}},
       {"capital-gain", ColumnKind::numeric, {}},
       {"capital-loss", ColumnKind::numeric, {}},
       {"hours-per-week", ColumnKind::numeric, {}},
       {"native-country", ColumnKind::categorical, {}}},
      "income",
      {"class", "salary", "label"},
      ">50K",
      "sex",
      {"Male"},
      true,
      false};
  static const RegistrySpec bank{
      {{"age", ColumnKind::numeric, {}},
       {"job", ColumnKind::categorical, {}},
       {"marital", ColumnKind::categorical, {}},
       {"education", ColumnKind::categorical, {}},
       {"default", ColumnKind::categorical, {}},
       {"balance", ColumnKind::numeric, {}},
       {"housing", ColumnKind::categorical, {}},
       {"loan", ColumnKind::categorical, {}},
       {"contact", ColumnKind::categorical, {}},
       {"day", ColumnKind::numeric, {}},
       {"month", ColumnKind::categorical, {}},
       {"duration", ColumnKind::numeric, {}},
       {"campaign", ColumnKind::numeric, {}},
       {"pdays", ColumnKind::numeric, {}},
       {"previous", ColumnKind::numeric, {}},
       {"poutcome", ColumnKind::categorical, {}}},
      "y",
      {"deposit", "subscribed"},
      "yes",
      "age_ge_25",
      {"yes"},
      false,
      true};
  static const RegistrySpec utrecht{
      {{"gender", ColumnKind::categorical, {}},
       {"age", ColumnKind::numeric, {}},
       {"nationality", ColumnKind::categorical, {}},
       {"sport", ColumnKind::categorical, {}},
       {"ind-university_grade", ColumnKind::numeric, {}},
       {"ind-debateclub", ColumnKind::categorical, {}},
       {"ind-programming_exp", ColumnKind::categorical, {}},
       {"ind-international_exp", ColumnKind::categorical, {}},
       {"ind-entrepeneur_exp", ColumnKind::categorical, {}},
       {"ind-languages", ColumnKind::numeric, {}},
       {"ind-exact_study", ColumnKind::categorical, {}},
       {"ind-degree", ColumnKind::categorical, {}},
       {"company", ColumnKind::categorical, {}}},
      "decision",
      {"hired"},
      "True",
      "gender",
      {"male"},
      false,
      false};
  switch (name) {
    case RegisteredName::adult: return adult;
    case RegisteredName::bank: return bank;
    default: return utrecht;
  }
}

struct ColumnBuilder {
  std::string name;
  ColumnKind kind;
  std::vector<std::string> raw;  // categorical cells before coding
  std::vector<double> nums;
};

Dataset assemble(Schema schema, std::vector<ColumnBuilder> cols, std::vector<std::uint8_t> y) {
  Dataset ds;
  ds.schema = std::move(schema);
  ds.y = std::move(y);
  for (auto& cb : cols) {
    int ci = ds.schema.column_index(cb.name);
    auto& sc = ds.schema.columns[std::size_t(ci)];
    ds.slot.resize(ds.schema.columns.size());
    if (cb.kind == ColumnKind::numeric) {
      ds.slot[std::size_t(ci)] = ds.numeric.size();
      ds.numeric.push_back(std::move(cb.nums));
    } else {
      std::set<std::string> uniq(cb.raw.begin(), cb.raw.end());
      sc.categories.assign(uniq.begin(), uniq.end());
      std::unordered_map<std::string, std::int32_t> code;
      for (std::size_t k = 0; k < sc.categories.size(); ++k)
        code[sc.categories[k]] = std::int32_t(k);
      std::vector<std::int32_t> v;
      v.reserve(cb.raw.size());
      for (const auto& s : cb.raw) v.push_back(code[s]);
      ds.slot[std::size_t(ci)] = ds.categorical.size();
      ds.categorical.push_back(std::move(v));
    }
  }
  return ds;
}

}  // namespace

Dataset load_registered(RegisteredName name, const std::string& path,
                        const LoadOverrides& overrides) {
  const RegistrySpec& reg = registry(name);
  RawTable t = read_csv(path);

  std::unordered_map<std::string, std::size_t> header_pos;
  for (std::size_t i = 0; i < t.header.size(); ++i) header_pos[norm_name(t.header[i])] = i;

  auto find_header = [&](const std::string& canonical,
                         const std::vector<std::string>& alternates) -> int {
    auto it = header_pos.find(norm_name(canonical));
    if (it != header_pos.end()) return int(it->second);
    for (const auto& alt : alternates) {
      it = header_pos.find(norm_name(alt));
      if (it != header_pos.end()) return int(it->second);
    }
    return -1;
  };

  std::string label_column = overrides.label_column.empty() ? reg.label : overrides.label_column;
  int label_pos = overrides.label_column.empty()
                      ? find_header(reg.label, reg.label_alternates)
                      : find_header(overrides.label_column, {});
  if (label_pos < 0)
    throw DataError("label column '" + label_column + "' not found in '" + path + "'");

  struct Bound {
    const RegistryColumn* rc;
    int pos;
  };
  std::vector<Bound> bound;
  for (const auto& rc : reg.columns) {
    if (norm_name(rc.canonical) == norm_name(label_column)) continue;
    int pos = find_header(rc.canonical, rc.alternates);
    if (pos < 0)
      throw DataError("registered column '" + rc.canonical + "' not found in '" + path + "'");
    bound.push_back({&rc, pos});
  }

  // Adult preprocessing: exact duplicate rows removed before anything else.
  std::vector<const std::vector<std::string>*> rows;
  rows.reserve(t.rows.size());
  if (reg.adult_rules) {
    std::unordered_set<std::string> seen;
    for (const auto& r : t.rows) {
      std::string key;
      for (const auto& f : r) {
        key += f;
        key.push_back('\x1f');
      }
      if (seen.insert(std::move(key)).second) rows.push_back(&r);
    }
  } else {
    for (const auto& r : t.rows) rows.push_back(&r);
  }
  const std::size_t n = rows.size();

  // Label coercion (adult files sometimes carry a trailing '.').
  std::vector<std::string> label_raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string v = (*rows[i])[std::size_t(label_pos)];
    if (reg.adult_rules && !v.empty() && v.back() == '.') v.pop_back();
    label_raw[i] = std::move(v);
  }
  std::set<std::string> label_values(label_raw.begin(), label_raw.end());
  if (label_values.size() != 2)
    throw DataError("label column '" + label_column + "' of '" + path + "' has " +
                    std::to_string(label_values.size()) + " distinct values, expected 2");
  std::string favorable = overrides.favorable_value.empty() ? reg.favorable : overrides.favorable_value;
  if (!label_values.count(favorable))
    throw DataError("favorable label value '" + favorable + "' does not occur in column '" +
                    label_column + "'");
  std::vector<std::uint8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = label_raw[i] == favorable ? 1 : 0;

  std::vector<ColumnBuilder> cols;
  for (const auto& b : bound) {
    ColumnBuilder cb;
    cb.name = b.rc->canonical;
    cb.kind = b.rc->kind;
    if (cb.kind == ColumnKind::numeric) {
      cb.nums.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::string& f = (*rows[i])[std::size_t(b.pos)];
        if (!parse_number(f, cb.nums[i]))
          throw DataError("cannot parse numeric value '" + f + "' in column '" + cb.name +
                          "' of '" + path + "'");
      }
    } else {
      cb.raw.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::string f = (*rows[i])[std::size_t(b.pos)];
        if (reg.adult_rules && (f.empty() || f == "?")) f = "unknown";
        cb.raw[i] = std::move(f);
      }
    }
    cols.push_back(std::move(cb));
  }

  Schema schema;
  for (const auto& cb : cols) schema.columns.push_back({cb.name, cb.kind, {}});
  schema.label_column = label_column;
  schema.favorable_value = favorable;

  if (reg.derive_age_ge_25) {
    ColumnBuilder cb;
    cb.name = "age_ge_25";
    cb.kind = ColumnKind::categorical;
    const ColumnBuilder* age = nullptr;
    for (const auto& c : cols)
      if (c.name == "age") age = &c;
    if (!age) throw DataError("bank registry requires an 'age' column");
    cb.raw.resize(n);
    for (std::size_t i = 0; i < n; ++i) cb.raw[i] = age->nums[i] >= 25.0 ? "yes" : "no";
    schema.columns.push_back({cb.name, cb.kind, {}});
    cols.push_back(std::move(cb));
  }

  schema.protected_attribute =
      overrides.protected_attribute.empty() ? reg.protected_attr : overrides.protected_attribute;
  schema.privileged_values =
      overrides.privileged_values.empty() ? reg.privileged : overrides.privileged_values;
  if (schema.column_index(schema.protected_attribute) < 0)
    throw DataError("protected attribute '" + schema.protected_attribute +
                    "' is not a loaded column");

  Dataset ds = assemble(std::move(schema), std::move(cols), std::move(y));

  // The privileged set must be a nonempty proper subset of observed values.
  const auto& pc = ds.schema.column(ds.schema.protected_attribute);
  if (pc.kind != ColumnKind::categorical)
    throw DataError("protected attribute '" + ds.schema.protected_attribute +
                    "' must be categorical");
  std::size_t hits = 0;
  for (const auto& v : ds.schema.privileged_values)
    if (std::find(pc.categories.begin(), pc.categories.end(), v) != pc.categories.end()) ++hits;
  if (hits == 0)
    throw DataError("no privileged value of '" + ds.schema.protected_attribute +
                    "' occurs in the data");
  if (hits == pc.categories.size())
    throw DataError("privileged values cover every observed value of '" +
                    ds.schema.protected_attribute + "'");
  return ds;
}

std::vector<std::uint8_t> group_mask(const Dataset& ds) {
  const auto& schema = ds.schema;
  if (schema.protected_attribute.empty())
    throw DataError("dataset has no protected attribute configured");
  int ci = schema.column_index(schema.protected_attribute);
  if (ci < 0) throw DataError("protected attribute column missing");
  const auto& col = schema.columns[std::size_t(ci)];
  std::vector<std::uint8_t> priv_code(col.categories.size(), 0);
  for (const auto& v : schema.privileged_values) {
    auto it = std::find(col.categories.begin(), col.categories.end(), v);
    if (it != col.categories.end()) priv_code[std::size_t(it - col.categories.begin())] = 1;
  }
  const auto& codes = ds.categorical[ds.slot[std::size_t(ci)]];
  std::vector<std::uint8_t> mask(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) mask[i] = priv_code[std::size_t(codes[i])];
  return mask;
}

namespace {

std::int32_t pick(Rng& rng, const std::vector<double>& probs) {
  double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return std::int32_t(i);
  }
  return std::int32_t(probs.size() - 1);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

Dataset synth_biased(std::size_t n, double bias_gap, std::uint64_t seed) {
  if (n < 20) throw DataError("synth_biased needs n >= 20");
  if (!(bias_gap >= 0.0 && bias_gap <= 1.0))
    throw DataError("synth_biased needs bias_gap in [0, 1]");
  double p_priv = 0.5 + bias_gap / 2.0;
  double p_unpriv = 0.5 - bias_gap / 2.0;
  if (p_priv > 1.0 + 1e-12 || p_unpriv < -1e-12)
    throw DataError("synth_biased: infeasible group probabilities");

  Rng rng(derive_seed(seed, 0xb1a5ed));
  ColumnBuilder group{"group", ColumnKind::categorical, {}, {}};
  ColumnBuilder f1{"f1", ColumnKind::numeric, {}, {}};
  ColumnBuilder f2{"f2", ColumnKind::numeric, {}, {}};
  ColumnBuilder f3{"f3", ColumnKind::numeric, {}, {}};
  ColumnBuilder c1{"c1", ColumnKind::categorical, {}, {}};
  ColumnBuilder c2{"c2", ColumnKind::categorical, {}, {}};
  std::vector<std::uint8_t> y(n);

  for (std::size_t i = 0; i < n; ++i) {
    bool priv = rng.next_double() < 0.5;
    bool fav = rng.next_double() < (priv ? p_priv : p_unpriv);
    y[i] = fav ? 1 : 0;
    group.raw.push_back(priv ? "A" : "B");
    f1.nums.push_back(1.2 * fav + 0.6 * priv + rng.next_normal());
    f2.nums.push_back(0.9 * fav + rng.next_normal());
    f3.nums.push_back(rng.next_normal());
    c1.raw.push_back(std::vector<std::string>{"u", "v", "w"}[std::size_t(
        pick(rng, fav ? std::vector<double>{0.5, 0.3, 0.2} : std::vector<double>{0.2, 0.3, 0.5}))]);
    c2.raw.push_back(rng.next_double() < (priv ? 0.7 : 0.3) ? "p" : "q");
  }

  Schema schema;
  schema.columns = {{"group", ColumnKind::categorical, {}}, {"f1", ColumnKind::numeric, {}},
                    {"f2", ColumnKind::numeric, {}},        {"f3", ColumnKind::numeric, {}},
                    {"c1", ColumnKind::categorical, {}},    {"c2", ColumnKind::categorical, {}}};
  schema.label_column = "outcome";
  schema.favorable_value = "good";
  schema.protected_attribute = "group";
  schema.privileged_values = {"A"};
  std::vector<ColumnBuilder> cols;
  cols.push_back(std::move(group));
  cols.push_back(std::move(f1));
  cols.push_back(std::move(f2));
  cols.push_back(std::move(f3));
  cols.push_back(std::move(c1));
  cols.push_back(std::move(c2));
  return assemble(std::move(schema), std::move(cols), std::move(y));
}

Dataset synth_adult_like(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xada17));
  static const std::vector<std::string> education_names = {
      "Preschool", "1st-4th", "5th-6th", "7th-8th", "9th", "10th", "11th", "12th",
      "HS-grad", "Some-college", "Assoc-voc", "Assoc-acdm", "Bachelors", "Masters",
      "Prof-school", "Doctorate"};
  static const std::vector<std::string> workclasses = {
      "Private", "Self-emp-not-inc", "Local-gov", "State-gov", "Self-emp-inc",
      "Federal-gov", "unknown"};
  static const std::vector<double> workclass_p = {0.745, 0.082, 0.068, 0.042, 0.036, 0.031, 0.056};
  static const std::vector<std::string> occ_high = {"Prof-specialty", "Exec-managerial"};
  static const std::vector<std::string> occ_mid = {"Sales", "Tech-support", "Craft-repair",
                                                   "Adm-clerical", "Protective-serv"};
  static const std::vector<std::string> occ_low = {"Other-service", "Machine-op-inspct",
                                                   "Handlers-cleaners", "Farming-fishing",
                                                   "Transport-moving"};
  static const std::vector<std::string> countries = {
      "United-States", "Mexico", "unknown", "Philippines", "Germany", "Canada",
      "Puerto-Rico", "El-Salvador", "India", "Cuba", "England", "Jamaica",
      "Poland", "France", "China", "Italy"};
  static const std::vector<double> country_p = {0.897, 0.020, 0.018, 0.006, 0.004, 0.004,
                                                0.004, 0.003, 0.003, 0.003, 0.003, 0.003,
                                                0.002, 0.001, 0.003, 0.003};
  static const std::vector<std::string> races = {"White", "Black", "Asian-Pac-Islander",
                                                 "Amer-Indian-Eskimo", "Other"};
  static const std::vector<double> race_p = {0.854, 0.096, 0.031, 0.010, 0.009};

  std::vector<ColumnBuilder> cols;
  auto num = [&](const char* name) {
    cols.push_back({name, ColumnKind::numeric, {}, {}});
    return cols.size() - 1;
  };
  auto cat = [&](const char* name) {
    cols.push_back({name, ColumnKind::categorical, {}, {}});
    return cols.size() - 1;
  };
  std::size_t i_age = num("age"), i_wc = cat("workclass"), i_fnlwgt = num("fnlwgt"),
              i_edu = cat("education"), i_edun = num("education-num"),
              i_mar = cat("Marital-status"), i_occ = cat("occupation"),
              i_rel = cat("relationship"), i_race = cat("race"), i_sex = cat("sex"),
              i_gain = num("capital-gain"), i_loss = num("capital-loss"),
              i_hours = num("hours-per-week"), i_country = cat("native-country");
  std::vector<std::uint8_t> y(n);

  for (std::size_t i = 0; i < n; ++i) {
    bool male = rng.next_double() < 0.669;
    double age = std::clamp(std::round(38.6 + 13.6 * rng.next_normal()), 17.0, 90.0);
    int edun = int(std::clamp(std::round(10.1 + 2.6 * rng.next_normal()), 1.0, 16.0));
    double married_p = sigmoid(-5.2 + 0.16 * age) * (male ? 1.0 : 0.72);
    bool married = rng.next_double() < married_p;
    std::string marital, relationship;
    if (married) {
      marital = "Married-civ-spouse";
      relationship = male ? "Husband" : "Wife";
    } else {
      double u = rng.next_double();
      if (age >= 40 && u < 0.35) {
        marital = u < 0.07 ? "Widowed" : "Divorced";
      } else if (u < 0.08) {
        marital = "Separated";
      } else {
        marital = "Never-married";
      }
      double v = rng.next_double();
      relationship = v < 0.45 ? "Not-in-family" : v < 0.70 ? "Own-child"
                     : v < 0.90 ? "Unmarried" : "Other-relative";
    }
    int occ_tier;  // 2 high, 1 mid, 0 low
    {
      double z = (edun - 10) * 0.55 + rng.next_normal();
      occ_tier = z > 1.2 ? 2 : z > -0.4 ? 1 : 0;
    }
    std::string occupation;
    if (rng.next_double() < 0.057) {
      occupation = "unknown";
    } else if (occ_tier == 2) {
      occupation = occ_high[rng.next_below(occ_high.size())];
    } else if (occ_tier == 1) {
      occupation = occ_mid[rng.next_below(occ_mid.size())];
    } else {
      occupation = occ_low[rng.next_below(occ_low.size())];
    }
    double gain = 0.0;
    if (rng.next_double() < 0.084) {
      gain = std::clamp(std::round(std::exp(8.3 + 1.0 * rng.next_normal())), 114.0, 41310.0);
      if (rng.next_double() < 0.018) gain = 99999.0;
    }
    double loss = 0.0;
    if (rng.next_double() < 0.047)
      loss = std::clamp(std::round(1870.0 + 380.0 * rng.next_normal()), 155.0, 4356.0);
    double hours = std::clamp(
        std::round(40.4 + 2.2 * (occ_tier - 1) + 1.8 * male + 11.0 * rng.next_normal()), 1.0, 99.0);
    double fnlwgt = std::round(std::exp(12.0 + 0.5 * rng.next_normal()));

    double z = -4.95 + 0.38 * (edun - 10) + 0.031 * std::min(age, 62.0) + 2.05 * married +
               0.18 * male + 0.55 * (occ_tier == 2) + 0.18 * (occ_tier == 1) +
               0.016 * (hours - 40.0) + 2.6 * (gain > 5000.0) + 0.6 * (loss > 1500.0);
    y[i] = rng.next_double() < sigmoid(z) ? 1 : 0;

    cols[i_age].nums.push_back(age);
    cols[i_wc].raw.push_back(workclasses[std::size_t(pick(rng, workclass_p))]);
    cols[i_fnlwgt].nums.push_back(fnlwgt);
    cols[i_edu].raw.push_back(education_names[std::size_t(edun - 1)]);
    cols[i_edun].nums.push_back(double(edun));
    cols[i_mar].raw.push_back(marital);
    cols[i_occ].raw.push_back(occupation);
    cols[i_rel].raw.push_back(relationship);
    cols[i_race].raw.push_back(races[std::size_t(pick(rng, race_p))]);
    cols[i_sex].raw.push_back(male ? "Male" : "Female");
    cols[i_gain].nums.push_back(gain);
    cols[i_loss].nums.push_back(loss);
    cols[i_hours].nums.push_back(hours);
    cols[i_country].raw.push_back(countries[std::size_t(pick(rng, country_p))]);
  }

  Schema schema;
  for (const auto& cb : cols) schema.columns.push_back({cb.name, cb.kind, {}});
  schema.label_column = "income";
  schema.favorable_value = ">50K";
  schema.protected_attribute = "sex";
  schema.privileged_values = {"Male"};
  return assemble(std::move(schema), std::move(cols), std::move(y));
}

Dataset synth_bank_like(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xbadc0de));
  static const std::vector<std::string> jobs = {
      "blue-collar", "management", "technician", "admin.", "services", "retired",
      "self-employed", "entrepreneur", "unemployed", "housemaid", "student", "unknown"};
  static const std::vector<std::string> months = {"may", "jul", "aug", "jun", "nov", "apr",
                                                  "feb", "jan", "oct", "sep", "mar", "dec"};
  static const std::vector<double> month_p = {0.31, 0.152, 0.137, 0.118, 0.088, 0.065,
                                              0.058, 0.031, 0.016, 0.013, 0.011, 0.005};

  std::vector<ColumnBuilder> cols;
  auto num = [&](const char* name) {
    cols.push_back({name, ColumnKind::numeric, {}, {}});
    return cols.size() - 1;
  };
  auto cat = [&](const char* name) {
    cols.push_back({name, ColumnKind::categorical, {}, {}});
    return cols.size() - 1;
  };
  std::size_t i_age = num("age"), i_job = cat("job"), i_mar = cat("marital"),
              i_edu = cat("education"), i_def = cat("default"), i_bal = num("balance"),
              i_hou = cat("housing"), i_loan = cat("loan"), i_con = cat("contact"),
              i_day = num("day"), i_mon = cat("month"), i_dur = num("duration"),
              i_cam = num("campaign"), i_pd = num("pdays"), i_prev = num("previous"),
              i_pout = cat("poutcome"), i_age25 = cat("age_ge_25");
  std::vector<std::uint8_t> y(n);

  for (std::size_t i = 0; i < n; ++i) {
    bool young = rng.next_double() < 0.04;
    double age = young ? std::clamp(std::round(21.5 + 1.8 * rng.next_normal()), 18.0, 24.0)
                       : std::clamp(std::round(42.0 + 10.5 * rng.next_normal()), 25.0, 95.0);
    std::string job;
    if (young && rng.next_double() < 0.35) {
      job = "student";
    } else if (age >= 60 && rng.next_double() < 0.55) {
      job = "retired";
    } else {
      static const std::vector<double> job_p = {0.25, 0.23, 0.19, 0.13, 0.10,
                                                0.0,  0.04, 0.035, 0.03, 0.03, 0.0, 0.005};
      job = jobs[std::size_t(pick(rng, job_p))];
    }
    std::string marital = age < 30 ? (rng.next_double() < 0.7 ? "single" : "married")
                                   : (rng.next_double() < 0.68 ? "married"
                                      : rng.next_double() < 0.6 ? "single" : "divorced");
    double ue = rng.next_double();
    std::string education = ue < 0.51 ? "secondary" : ue < 0.80 ? "tertiary"
                            : ue < 0.96 ? "primary" : "unknown";
    bool in_default = rng.next_double() < 0.018;
    double balance = std::round(std::exp(6.1 + 1.25 * rng.next_normal())) - 250.0;
    bool housing = rng.next_double() < 0.556;
    bool loan = rng.next_double() < 0.16;
    double uc = rng.next_double();
    std::string contact = uc < 0.648 ? "cellular" : uc < 0.938 ? "unknown" : "telephone";
    double day = 1.0 + double(rng.next_below(31));
    std::string month = months[std::size_t(pick(rng, month_p))];
    double duration = std::round(std::exp(5.05 + 0.95 * rng.next_normal()));
    double campaign = 1.0 + std::floor(-std::log(std::max(rng.next_double(), 1e-12)) / 0.60);
    bool contacted_before = rng.next_double() < 0.182;
    double pdays = contacted_before ? 1.0 + double(rng.next_below(600)) : -1.0;
    double previous =
        contacted_before ? 1.0 + std::floor(-std::log(std::max(rng.next_double(), 1e-12)) / 0.8)
                         : 0.0;
    std::string poutcome = "unknown";
    bool prev_success = false;
    if (contacted_before) {
      double up = rng.next_double();
      if (up < 0.18) {
        poutcome = "success";
        prev_success = true;
      } else if (up < 0.82) {
        poutcome = "failure";
      } else {
        poutcome = "other";
      }
    }
    bool rare_month = month == "mar" || month == "sep" || month == "oct" || month == "dec";
    double z = -3.35 + 1.05 * (std::log(std::max(duration, 1.0)) - 5.05) + 2.2 * prev_success +
               1.3 * rare_month + 0.55 * (contact == "cellular") + 0.5 * !housing - 0.4 * loan +
               0.55 * young + 0.45 * (job == "student") + 0.5 * (job == "retired") +
               0.25 * (education == "tertiary") - 0.07 * std::min(campaign, 10.0);
    y[i] = rng.next_double() < sigmoid(z) ? 1 : 0;

    cols[i_age].nums.push_back(age);
    cols[i_job].raw.push_back(job);
    cols[i_mar].raw.push_back(marital);
    cols[i_edu].raw.push_back(education);
    cols[i_def].raw.push_back(in_default ? "yes" : "no");
    cols[i_bal].nums.push_back(balance);
    cols[i_hou].raw.push_back(housing ? "yes" : "no");
    cols[i_loan].raw.push_back(loan ? "yes" : "no");
    cols[i_con].raw.push_back(contact);
    cols[i_day].nums.push_back(day);
    cols[i_mon].raw.push_back(month);
    cols[i_dur].nums.push_back(duration);
    cols[i_cam].nums.push_back(campaign);
    cols[i_pd].nums.push_back(pdays);
    cols[i_prev].nums.push_back(previous);
    cols[i_pout].raw.push_back(poutcome);
    cols[i_age25].raw.push_back(age >= 25.0 ? "yes" : "no");
  }

  Schema schema;
  for (const auto& cb : cols) schema.columns.push_back({cb.name, cb.kind, {}});
  schema.label_column = "y";
  schema.favorable_value = "yes";
  schema.protected_attribute = "age_ge_25";
  schema.privileged_values = {"yes"};
  return assemble(std::move(schema), std::move(cols), std::move(y));
}

Dataset synth_utrecht(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x07c87));
  static const std::vector<std::string> nationalities = {"Dutch", "German", "Belgian"};
  static const std::vector<double> nationality_p = {0.70, 0.16, 0.14};
  static const std::vector<std::string> sports = {"Football", "Cricket", "Rugby", "Swimming",
                                                  "Tennis", "Running", "Chess", "Golf"};
  static const std::vector<double> sport_p = {0.20, 0.10, 0.10, 0.15, 0.12, 0.15, 0.08, 0.10};
  static const std::vector<std::string> degrees = {"bachelor", "master", "phd"};
  static const std::vector<double> degree_p = {0.50, 0.35, 0.15};
  static const std::vector<std::string> companies = {"A", "B", "C", "D", "E"};

  std::vector<ColumnBuilder> cols;
  auto num = [&](const char* name) {
    cols.push_back({name, ColumnKind::numeric, {}, {}});
    return cols.size() - 1;
  };
  auto cat = [&](const char* name) {
    cols.push_back({name, ColumnKind::categorical, {}, {}});
    return cols.size() - 1;
  };
  std::size_t i_gender = cat("gender"), i_age = num("age"), i_nat = cat("nationality"),
              i_sport = cat("sport"), i_grade = num("ind-university_grade"),
              i_debate = cat("ind-debateclub"), i_prog = cat("ind-programming_exp"),
              i_intl = cat("ind-international_exp"), i_entr = cat("ind-entrepeneur_exp"),
              i_lang = num("ind-languages"), i_exact = cat("ind-exact_study"),
              i_degree = cat("ind-degree"), i_company = cat("company");
  std::vector<std::uint8_t> y(n);

  for (std::size_t i = 0; i < n; ++i) {
    bool male = rng.next_double() < 0.5;
    double age = std::clamp(std::round(25.0 + 2.3 * rng.next_normal()), 21.0, 33.0);
    double grade = std::clamp(std::round((62.0 + 8.0 * rng.next_normal()) * 2.0) / 2.0, 45.0, 80.0);
    bool debate = rng.next_double() < 0.3;
    bool prog = rng.next_double() < 0.45;
    bool intl = rng.next_double() < 0.4;
    bool entr = rng.next_double() < 0.2;
    double languages = double(pick(rng, {0.15, 0.45, 0.30, 0.10}));
    bool exact = rng.next_double() < 0.5;
    std::int32_t degree = pick(rng, degree_p);
    std::int32_t company = std::int32_t(rng.next_below(companies.size()));
    static const std::vector<double> company_bump = {0.35, 0.0, -0.4, 0.15, -0.1};
    double z = -1.05 + 0.065 * (grade - 62.0) + 0.85 * prog + 0.5 * intl + 0.45 * exact +
               0.4 * (languages >= 2.0) + 0.55 * (degree >= 1) + 0.25 * debate +
               0.45 * male + company_bump[std::size_t(company)];
    y[i] = rng.next_double() < sigmoid(z) ? 1 : 0;

    cols[i_gender].raw.push_back(male ? "male" : "female");
    cols[i_age].nums.push_back(age);
    cols[i_nat].raw.push_back(nationalities[std::size_t(pick(rng, nationality_p))]);
    cols[i_sport].raw.push_back(sports[std::size_t(pick(rng, sport_p))]);
    cols[i_grade].nums.push_back(grade);
    cols[i_debate].raw.push_back(debate ? "True" : "False");
    cols[i_prog].raw.push_back(prog ? "True" : "False");
    cols[i_intl].raw.push_back(intl ? "True" : "False");
    cols[i_entr].raw.push_back(entr ? "True" : "False");
    cols[i_lang].nums.push_back(languages);
    cols[i_exact].raw.push_back(exact ? "True" : "False");
    cols[i_degree].raw.push_back(degrees[std::size_t(degree)]);
    cols[i_company].raw.push_back(companies[std::size_t(company)]);
  }

  Schema schema;
  for (const auto& cb : cols) schema.columns.push_back({cb.name, cb.kind, {}});
  schema.label_column = "decision";
  schema.favorable_value = "True";
  schema.protected_attribute = "gender";
  schema.privileged_values = {"male"};
  return assemble(std::move(schema), std::move(cols), std::move(y));
}

std::string describe(const Dataset& ds) {
  std::ostringstream out;
  out << "records: " << ds.n() << "\n";
  out << "label: " << ds.schema.label_column << " (favorable: " << ds.schema.favorable_value
      << ")\n";
  std::size_t fav = 0;
  for (auto v : ds.y) fav += v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * double(fav) / double(ds.n()));
  out << "favorable rate: " << buf << " (" << fav << "/" << ds.n() << ")\n";
  auto mask = group_mask(ds);
  std::size_t priv = 0, priv_fav = 0, unpriv_fav = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      ++priv;
      priv_fav += ds.y[i];
    } else {
      unpriv_fav += ds.y[i];
    }
  }
  out << "protected: " << ds.schema.protected_attribute << " (privileged:";
  for (const auto& v : ds.schema.privileged_values) out << " " << v;
  out << ")\n";
  out << "privileged group: " << priv << " records";
  if (priv > 0) {
    std::snprintf(buf, sizeof(buf), ", favorable rate %.3f", double(priv_fav) / double(priv));
    out << buf;
  }
  out << "\nunprivileged group: " << (ds.n() - priv) << " records";
  if (ds.n() - priv > 0) {
    std::snprintf(buf, sizeof(buf), ", favorable rate %.3f",
                  double(unpriv_fav) / double(ds.n() - priv));
    out << buf;
  }
  out << "\ncolumns (" << ds.schema.columns.size() << "):\n";
  for (const auto& c : ds.schema.columns) {
    out << "  " << c.name
        << (c.kind == ColumnKind::numeric ? " [numeric]" : " [categorical, ");
    if (c.kind == ColumnKind::categorical) out << c.categories.size() << " values]";
    out << "\n";
  }
  return out.str();
}

}  // namespace fairaudit
