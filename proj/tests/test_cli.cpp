#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(MZV_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) res.out += buf.data();
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

double first_number(const std::string& s) {
    return std::stod(s);
}

// Minimal structural validator for the subset of JSON Schema the report
// schema uses (type / properties / required / items / enum).
bool validates(const json& schema, const json& value);

bool type_matches(const std::string& t, const json& v) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    return false;
}

bool validates(const json& schema, const json& value) {
    if (schema.contains("type") && !type_matches(schema["type"].get<std::string>(), value))
        return false;
    if (schema.contains("enum")) {
        bool any = false;
        for (auto& e : schema["enum"])
            if (e == value) any = true;
        if (!any) return false;
    }
    if (schema.contains("required"))
        for (auto& key : schema["required"])
            if (!value.contains(key.get<std::string>())) return false;
    if (schema.contains("properties") && value.is_object())
        for (auto& [key, sub] : schema["properties"].items())
            if (value.contains(key) && !validates(sub, value[key])) return false;
    if (schema.contains("items") && value.is_array())
        for (auto& item : value)
            if (!validates(schema["items"], item)) return false;
    return true;
}

const std::string kTable = std::string(MZV_DATA_DIR) + "/ohno_table_w6.txt";

}  // namespace

TEST_CASE("cli dual") {
    auto r = run_cli("dual \"(3)\"");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "(2,1)\n");
    auto empty = run_cli("dual \"()\"");
    CHECK(empty.exit_code == 0);
    CHECK(empty.out == "()\n");
    auto bad = run_cli("dual \"(1,2)\"");
    CHECK(bad.exit_code == 3);
    CHECK(bad.out.find("non-admissible") != std::string::npos);
    auto unparsable = run_cli("dual \"(1,\"");
    CHECK(unparsable.exit_code == 2);
}

TEST_CASE("cli eval") {
    auto zeta = run_cli("--N 200000 eval zeta \"(2)\"");
    CHECK(zeta.exit_code == 0);
    CHECK(std::fabs(first_number(zeta.out) - 1.6449340668) < 1e-9);
    auto F = run_cli("--N 200000 eval F \"(2)\" --lambda 0");
    CHECK(F.exit_code == 0);
    CHECK(std::fabs(first_number(F.out) - 1.2020569032) < 1e-9);
    auto li = run_cli("--N 200000 eval li \"(2)\" --z 0.5");
    CHECK(li.exit_code == 0);
    CHECK(std::fabs(first_number(li.out) - 0.5822405265) < 1e-9);
    auto f = run_cli("--N 200000 --format json eval f \"((2,1))\" --lambda 0.5");
    CHECK(f.exit_code == 0);
    json j = json::parse(f.out);
    CHECK(j.contains("value"));
    CHECK(j.contains("error_estimate"));
    CHECK(j["N"] == 200000);
    auto guard = run_cli("--N 200000 eval f \"((2,1))\" --lambda 1.0002");
    CHECK(guard.exit_code == 3);
}

TEST_CASE("cli verify table emits a schema-valid report") {
    auto r = run_cli("--N 150000 --format json --table \"" + kTable +
                     "\" verify table --max-weight 5");
    REQUIRE(r.exit_code == 0);
    json report = json::parse(r.out);
    std::ifstream schema_in(std::string(MZV_DOCS_DIR) + "/report.schema.json");
    REQUIRE(schema_in.good());
    json schema = json::parse(schema_in);
    CHECK(validates(schema, report));
    CHECK(report["summary"]["failed"] == 0);
    CHECK(report["summary"]["total"] == 15);  // identities of weight <= 5
}

TEST_CASE("cli verify suites exit zero") {
    CHECK(run_cli("--N 150000 verify sum --max-weight 5").exit_code == 0);
    CHECK(run_cli("--N 150000 verify duality --max-weight 5").exit_code == 0);
    CHECK(run_cli("--N 120000 verify landen --max-weight 3").exit_code == 0);
    CHECK(run_cli("--N 120000 verify ohno --max-weight 4").exit_code == 0);
    CHECK(run_cli("--N 120000 verify lemma --max-weight 3").exit_code == 0);
    CHECK(run_cli("--N 120000 verify difference --max-weight 3").exit_code == 0);
}

TEST_CASE("cli verify is reproducible under a seed") {
    std::string args = "--N 100000 --seed 7 --format csv verify difference --max-weight 3 --samples 2";
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("cli fit prints table-grammar identities") {
    auto f11 = run_cli("--N 250000 fit \"((1,1))\"");
    CHECK(f11.exit_code == 0);
    CHECK(f11.out.substr(0, f11.out.find('\n')) == "f(1,1) = F(1)");
    auto f12 = run_cli("--N 250000 fit \"((1,2))\"");
    CHECK(f12.exit_code == 0);
    CHECK(f12.out.substr(0, f12.out.find('\n')) == "f(1,2) = F(2)");
    auto f22 = run_cli("--N 250000 fit \"((2,2))\"");
    CHECK(f22.exit_code == 0);
    CHECK(f22.out.substr(0, f22.out.find('\n')) == "f(2,2) = 2 F(3) + F(1,2) - z(2) F(1)");
}

TEST_CASE("cli usage errors exit 2") {
    CHECK(run_cli("verify nosuchsuite").exit_code == 2);
    CHECK(run_cli("eval zeta").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
}

TEST_CASE("cli environment default N") {
    std::string cmd = "MZV_DEFAULT_N=50000 " + std::string(MZV_CLI_PATH) +
                      " --format json eval zeta \"(2)\" 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    pclose(pipe);
    json j = json::parse(out);
    CHECK(j["N"] == 50000);
}
