#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "fairaudit/dataset.hpp"

using namespace fairaudit;

namespace {

// Writes content to a unique temp file and returns the path.
std::string temp_csv(const std::string& tag, const std::string& content) {
  std::string path = "/tmp/fairaudit_test_" + tag + ".csv";
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

const char* kAdultHeader =
    "age,workclass,fnlwgt,education,education-num,marital-status,occupation,"
    "relationship,race,sex,capital-gain,capital-loss,hours-per-week,"
    "native-country,income\n";

std::string adult_row(const std::string& age, const std::string& sex,
                      const std::string& income, const std::string& occupation = "Sales",
                      const std::string& race = "White") {
  return age + ",Private,120000,Bachelors,13,Never-married," + occupation +
         ",Not-in-family," + race + "," + sex + ",0,0,40,United-States," + income + "\n";
}

}  // namespace

TEST_CASE("adult loader normalizes headers and applies the cleanup rules") {
  std::string csv = kAdultHeader;
  csv += adult_row("39", "Male", ">50K");
  csv += adult_row("39", "Male", ">50K");          // exact duplicate, dropped
  csv += adult_row("28", "Female", "<=50K.");      // trailing period stripped
  csv += adult_row("45", "Female", ">50K", "?");   // missing value -> unknown
  csv += adult_row("51", "Male", "<=50K");
  std::string path = temp_csv("adult_basic", csv);

  Dataset ds = load_registered(RegisteredName::adult, path);
  CHECK(ds.n() == 4);  // duplicate removed
  CHECK(ds.schema.label_column == "income");
  CHECK(ds.schema.favorable_value == ">50K");
  CHECK(ds.schema.protected_attribute == "sex");
  REQUIRE(ds.schema.privileged_values.size() == 1);
  CHECK(ds.schema.privileged_values[0] == "Male");

  const Schema::Column& occ = ds.schema.column("occupation");
  bool has_unknown = false;
  for (const auto& c : occ.categories) has_unknown |= (c == "unknown");
  CHECK(has_unknown);

  // y follows the favorable value; the stripped "<=50K." row is unfavorable
  std::size_t favorable = 0;
  for (auto v : ds.y) favorable += v;
  CHECK(favorable == 2);
}

TEST_CASE("adult loader accepts alternate header spellings") {
  std::string csv =
      "age,workclass,fnlwgt,education,educational-num,marital.status,occupation,"
      "relationship,race,gender,capital_gain,capital_loss,hours_per_week,"
      "native_country,class\n";
  csv += adult_row("39", "Male", ">50K");
  csv += adult_row("28", "Female", "<=50K");
  std::string path = temp_csv("adult_alt", csv);

  Dataset ds = load_registered(RegisteredName::adult, path);
  CHECK(ds.n() == 2);
  CHECK(ds.schema.column_index("sex") >= 0);
  CHECK(ds.schema.column_index("education-num") >= 0);
}

TEST_CASE("CSV parsing handles quotes, CRLF, and semicolon sniffing") {
  // bank ships semicolon-separated with quoted headers
  std::string csv =
      "\"age\";\"job\";\"marital\";\"education\";\"default\";\"balance\";\"housing\";"
      "\"loan\";\"contact\";\"day\";\"month\";\"duration\";\"campaign\";\"pdays\";"
      "\"previous\";\"poutcome\";\"y\"\r\n";
  csv += "30;\"admin.\";married;secondary;no;1500;yes;no;cellular;5;may;120;1;-1;0;unknown;no\r\n";
  csv += "22;\"services\";single;tertiary;no;300;no;no;cellular;6;jun;400;2;-1;0;unknown;yes\r\n";
  csv += "41;\"admin.\";married;primary;no;900;yes;yes;telephone;7;jul;90;1;-1;0;unknown;no\r\n";
  std::string path = temp_csv("bank_semi", csv);

  Dataset ds = load_registered(RegisteredName::bank, path);
  CHECK(ds.n() == 3);
  // derived privileged-group column: age >= 25
  int ix = ds.schema.column_index("age_ge_25");
  REQUIRE(ix >= 0);
  CHECK(ds.schema.protected_attribute == "age_ge_25");
  auto mask = group_mask(ds);
  CHECK(mask == std::vector<std::uint8_t>{1, 0, 1});
}

TEST_CASE("loader rejects malformed inputs") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_registered(RegisteredName::adult, "/nonexistent/x.csv"), DataError);
  }
  SUBCASE("missing required column") {
    std::string path = temp_csv("bad_cols", "age,sex,income\n39,Male,>50K\n");
    CHECK_THROWS_AS(load_registered(RegisteredName::adult, path), DataError);
  }
  SUBCASE("ragged row") {
    std::string csv = kAdultHeader;
    csv += adult_row("39", "Male", ">50K");
    csv += "1,2,3\n";
    std::string path = temp_csv("ragged", csv);
    CHECK_THROWS_AS(load_registered(RegisteredName::adult, path), DataError);
  }
  SUBCASE("label not binary") {
    std::string csv = kAdultHeader;
    csv += adult_row("39", "Male", ">50K");
    csv += adult_row("28", "Female", "<=50K");
    csv += adult_row("33", "Male", "maybe");
    std::string path = temp_csv("threeway", csv);
    CHECK_THROWS_AS(load_registered(RegisteredName::adult, path), DataError);
  }
  SUBCASE("favorable value absent") {
    std::string csv = kAdultHeader;
    csv += adult_row("39", "Male", "A");
    csv += adult_row("28", "Female", "B");
    std::string path = temp_csv("nofav", csv);
    CHECK_THROWS_AS(load_registered(RegisteredName::adult, path), DataError);
  }
}

TEST_CASE("load overrides can repoint label and protected attribute") {
  std::string csv = kAdultHeader;
  csv += adult_row("39", "Male", ">50K");
  csv += adult_row("28", "Female", "<=50K", "Sales", "Black");
  csv += adult_row("45", "Female", ">50K");
  std::string path = temp_csv("overrides", csv);

  LoadOverrides ov;
  ov.protected_attribute = "race";
  ov.privileged_values = {"White"};
  Dataset ds = load_registered(RegisteredName::adult, path, ov);
  CHECK(ds.schema.protected_attribute == "race");

  SUBCASE("privileged values must exist in the column") {
    LoadOverrides bad;
    bad.protected_attribute = "race";
    bad.privileged_values = {"Martian"};
    CHECK_THROWS_AS(load_registered(RegisteredName::adult, path, bad), DataError);
  }
  SUBCASE("privileged set must be a proper subset") {
    LoadOverrides bad;
    // every row is United-States, so nothing would be unprivileged
    bad.protected_attribute = "native-country";
    bad.privileged_values = {"United-States"};
    CHECK_THROWS_AS(load_registered(RegisteredName::adult, path, bad), DataError);
  }
  SUBCASE("protected column must be categorical") {
    LoadOverrides bad;
    bad.protected_attribute = "age";
    bad.privileged_values = {"39"};
    CHECK_THROWS_AS(load_registered(RegisteredName::adult, path, bad), DataError);
  }
}

TEST_CASE("registered_name_from maps names and rejects unknowns") {
  CHECK(registered_name_from("adult") == RegisteredName::adult);
  CHECK(registered_name_from("bank") == RegisteredName::bank);
  CHECK(registered_name_from("utrecht") == RegisteredName::utrecht);
  CHECK_THROWS_AS(registered_name_from("compas"), ConfigError);
}

TEST_CASE("synth_biased is deterministic with a controlled group gap") {
  Dataset a = synth_biased(2000, 0.3, 9);
  Dataset b = synth_biased(2000, 0.3, 9);
  CHECK(a.n() == 2000);
  CHECK(a.y == b.y);
  CHECK(a.numeric[0] == b.numeric[0]);

  auto mask = group_mask(a);
  double fav_p = 0, n_p = 0, fav_u = 0, n_u = 0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (mask[i]) { n_p += 1; fav_p += a.y[i]; }
    else { n_u += 1; fav_u += a.y[i]; }
  }
  double gap = fav_p / n_p - fav_u / n_u;
  CHECK(gap == doctest::Approx(0.3).epsilon(0.15));

  Dataset c = synth_biased(2000, 0.3, 10);
  CHECK(a.y != c.y);  // seed actually matters

  CHECK_THROWS_AS(synth_biased(5, 0.3, 1), DataError);
  CHECK_THROWS_AS(synth_biased(2000, 1.5, 1), DataError);
}

TEST_CASE("schema-shaped generators mirror their registered layouts") {
  SUBCASE("adult-like") {
    Dataset ds = synth_adult_like(500, 3);
    CHECK(ds.n() == 500);
    CHECK(ds.schema.label_column == "income");
    CHECK(ds.schema.favorable_value == ">50K");
    CHECK(ds.schema.protected_attribute == "sex");
    CHECK(ds.schema.columns.size() == 14);
    CHECK(ds.schema.column_index("hours-per-week") >= 0);
  }
  SUBCASE("bank-like") {
    Dataset ds = synth_bank_like(500, 3);
    CHECK(ds.schema.label_column == "y");
    CHECK(ds.schema.protected_attribute == "age_ge_25");
    CHECK(ds.schema.column_index("age_ge_25") >= 0);
    CHECK(ds.schema.column_index("duration") >= 0);
  }
  SUBCASE("utrecht") {
    Dataset ds = synth_utrecht(500, 3);
    CHECK(ds.schema.label_column == "decision");
    CHECK(ds.schema.favorable_value == "True");
    CHECK(ds.schema.protected_attribute == "gender");
    CHECK(ds.schema.column_index("ind-university_grade") >= 0);
  }
}

TEST_CASE("subset keeps schema and reindexes rows") {
  Dataset ds = synth_biased(100, 0.2, 4);
  Dataset sub = ds.subset({5, 10, 15});
  CHECK(sub.n() == 3);
  CHECK(sub.schema.columns.size() == ds.schema.columns.size());
  CHECK(sub.y[0] == ds.y[5]);
  CHECK(sub.y[2] == ds.y[15]);
  for (std::size_t c = 0; c < ds.schema.columns.size(); ++c) {
    if (ds.schema.columns[c].kind == ColumnKind::numeric) {
      const auto& all = ds.numeric[ds.slot[c]];
      const auto& cut = sub.numeric[sub.slot[c]];
      CHECK(cut[1] == all[10]);
    }
  }
}

TEST_CASE("describe summarizes size, label, and groups") {
  Dataset ds = synth_biased(200, 0.2, 4);
  std::string text = describe(ds);
  CHECK(text.find("records: 200") != std::string::npos);
  CHECK(text.find("outcome") != std::string::npos);
  CHECK(text.find("privileged") != std::string::npos);
}
