#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "poncelet/scenario.hpp"

using namespace poncelet;
using namespace poncelet::harness;

TEST_CASE("scenario parsing of the documented command lines") {
    Scenario s = parse_scenario({"cayley", "--a", "4,2,1", "--mu", "3/2", "--n", "3"});
    CHECK(s.command == Command::cayley);
    CHECK(s.exact_mode);
    CHECK(s.n == 3);
    CHECK(s.a.size() == 3);
    CHECK(s.mu.size() == 1);

    Scenario sim = parse_scenario({"simulate", "--b", "2,1", "--c", "1/2", "--start",
                                   "-1,0", "--dir", "1,1", "--bounces", "50"});
    CHECK(sim.command == Command::simulate);
    CHECK(sim.bounces == 50);
    CHECK(sim.exact_mode);

    // floats demote the arithmetic mode
    Scenario f = parse_scenario({"cayley", "--a", "4.0,2,1", "--mu", "1.5", "--n", "3"});
    CHECK(!f.exact_mode);
}

TEST_CASE("bad parameters are named") {
    CHECK_THROWS_AS(parse_scenario({"cayley", "--a", "4,2,1", "--mu", "1/2", "--n", "0"}),
                    Error);
    CHECK_THROWS_AS(parse_scenario({"no-such-command"}), Error);
    CHECK_THROWS_AS(parse_scenario({}), Error);
    try {
        parse_scenario({"cayley", "--a", "4,2,1", "--mu", "1/2", "--n", "0"});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadParameter);
        CHECK(std::string(e.what()).find("n must be >= 1") != std::string::npos);
    }
}

TEST_CASE("execute cayley: n < d reports the reason") {
    Scenario s = parse_scenario({"cayley", "--a", "4,2,1", "--mu", "1/2", "--n", "1"});
    Report r = execute(s);
    CHECK(r.doc["verdict"]["periodic"] == false);
    CHECK(r.doc["reason"] == "n<d");
    CHECK(r.doc["mode"] == "exact");
}

TEST_CASE("execute scan-periods finds the verified period-3 witness") {
    Scenario s = parse_scenario(
        {"scan-periods", "--a", "4,2,1", "--n", "3", "--bracket", "0.05,0.999"});
    Report r = execute(s);
    bool verified = false;
    for (const auto& w : r.doc["witnesses"])
        verified |= w["verified"].get<bool>();
    CHECK(verified);
}

TEST_CASE("execute potential renders the catalog element") {
    Scenario s = parse_scenario({"potential", "--b", "2,1", "--basis", "V3"});
    Report r = execute(s);
    CHECK(r.doc["residual"] == "zero (exact)");
    CHECK(r.doc["recurrence"] == true);
    std::string pretty = r.doc["pretty"].get<std::string>();
    CHECK(pretty.find("x1^6") != std::string::npos);
}

TEST_CASE("reports are byte-stable given the scenario and seed") {
    Scenario s = parse_scenario({"hierarchy-check", "--b", "2,1", "--samples", "50",
                                 "--seed", "99"});
    Report r1 = execute(s);
    Report r2 = execute(s);
    CHECK(r1.doc.dump() == r2.doc.dump());
    CHECK(r1.table == r2.table);

    Scenario sim = parse_scenario({"simulate", "--b", "2,1", "--c", "1/2", "--start",
                                   "-1,0", "--dir", "1,1", "--bounces", "20"});
    CHECK(execute(sim).table == execute(sim).table);
}

TEST_CASE("emit_report writes report and table files") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "poncelet_harness_test";
    fs::remove_all(dir);
    Scenario s = parse_scenario({"simulate", "--b", "2,1", "--c", "1/2", "--start",
                                 "-1,0", "--dir", "1,1", "--bounces", "5", "--output",
                                 dir.string()});
    Report r = execute(s);
    emit_report(r, s);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "table.tsv"));
    std::ifstream table(dir / "table.tsv");
    std::string header;
    std::getline(table, header);
    CHECK(header.find("bounce") != std::string::npos);
    CHECK(header.find("x1") != std::string::npos);
    CHECK(header.find("caustic1") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cayley with an output dir writes the series dump") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "poncelet_series_test";
    fs::remove_all(dir);
    Scenario s = parse_scenario({"cayley", "--a", "4,2,1", "--mu", "4/5", "--n", "4",
                                 "--output", dir.string()});
    Report r = execute(s);
    emit_report(r, s);
    CHECK(fs::exists(dir / "series.txt"));
    std::ifstream in(dir / "series.txt");
    std::string l0, l1, l2, l3;
    std::getline(in, l0);
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    CHECK(l0 == "1");
    CHECK(l1 == "-3/2");
    CHECK(l2 == "13/32");
    CHECK(l3 == "0");  // T_3 = 0: the witness is also an exact 2-torsion point
    fs::remove_all(dir);
}

TEST_CASE("hierarchy-check reports the corrected closed-form agreement") {
    Scenario s = parse_scenario({"hierarchy-check", "--b", "3,2,1", "--samples", "20"});
    Report r = execute(s);
    CHECK(r.doc["closed_form_adjugate_matches"] == true);
}

TEST_CASE("config document merges with flags winning") {
    namespace fs = std::filesystem;
    fs::path cfg = fs::temp_directory_path() / "poncelet_cfg.ini";
    {
        std::ofstream out(cfg);
        out << "[cayley]\n";
        out << "a=\"4,2,1\"\n";
        out << "mu=\"1/2\"\n";
        out << "n=3\n";
    }
    Scenario s = parse_scenario({"cayley", "--config", cfg.string(), "--n", "4"});
    CHECK(s.n == 4);             // flag wins
    CHECK(s.a.size() == 3);      // config supplies the rest
    CHECK(s.mu.size() == 1);
    fs::remove(cfg);
}
