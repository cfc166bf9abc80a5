// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "revemb/io.hpp"
#include "test_support.hpp"

using namespace revemb;
using namespace revemb::testing;

namespace {

std::filesystem::path write_temp(const std::string &name,
                                 const std::string &content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("parse_matrix_csv basics") {
    std::istringstream in("0.5,0.5\n0.3,0.7\n");
    const Matrix m = parse_matrix_csv(in);
    CHECK(m.dim() == 2);
    CHECK(m(1, 0) == 0.3);
}

TEST_CASE("parse_matrix_csv skips comments and blank lines") {
    std::istringstream in("# a comment\n\n1.0,0.0\n0.0,1.0\n");
    CHECK(parse_matrix_csv(in).dim() == 2);
}

TEST_CASE("parse_matrix_csv rejects ragged and non-square input") {
    std::istringstream ragged("0.5,0.5\n0.3\n");
    CHECK_THROWS_AS(parse_matrix_csv(ragged), ParseError);

    std::istringstream rect("1,0,0\n0,1,0\n");
    CHECK_THROWS_AS(parse_matrix_csv(rect), NotSquareError);

    std::istringstream junk("0.5,oops\n");
    try {
        parse_matrix_csv(junk);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.line == 1);
        CHECK(e.column == 2);
    }

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_matrix_csv(empty), ParseError);
}

TEST_CASE("parse_matrix_json basics and failures") {
    std::istringstream one("{\"matrix\": [[1.0]]}");
    CHECK(parse_matrix_json(one).dim() == 1);

    std::istringstream missing("{\"m\": [[1.0]]}");
    CHECK_THROWS_AS(parse_matrix_json(missing), ParseError);

    std::istringstream invalid("{nope");
    CHECK_THROWS_AS(parse_matrix_json(invalid), ParseError);

    std::istringstream rect("{\"matrix\": [[1, 0], [1, 0], [0, 1]]}");
    CHECK_THROWS_AS(parse_matrix_json(rect), NotSquareError);
}

TEST_CASE("parse_matrix_file infers the format from the extension") {
    const auto csv = write_temp("revemb_io_test.csv", "1,0\n0,1\n");
    CHECK(parse_matrix_file(csv.string()).dim() == 2);

    const auto json = write_temp("revemb_io_test.json",
                                 "{\"matrix\": [[0.5, 0.5], [0.5, 0.5]]}");
    CHECK(parse_matrix_file(json.string()).dim() == 2);
    CHECK(parse_matrix_file(json.string(), FileFormat::Json)(0, 0) == 0.5);

    CHECK_THROWS_AS(parse_matrix_file("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("parse_trajectory infers or enforces the state count") {
    std::istringstream in("0\n1\n0\n");
    const auto traj = parse_trajectory(in, 1.0);
    CHECK(traj.states == std::vector<int>{0, 1, 0});
    CHECK(traj.n == 2);

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_trajectory(empty, 1.0), ParseError);

    std::istringstream short_file("0\n");
    CHECK_THROWS_AS(parse_trajectory(short_file, 1.0), ParseError);

    std::istringstream overflowing("0\n2\n");
    CHECK_THROWS_AS(parse_trajectory(overflowing, 1.0, 2),
                    IndexOutOfRangeError);

    std::istringstream negative("0\n-1\n");
    CHECK_THROWS_AS(parse_trajectory(negative, 1.0), ParseError);
}

TEST_CASE("write_trajectory round trip") {
    Trajectory traj{{0, 2, 1, 2}, 0.5, 3};
    std::ostringstream out;
    write_trajectory(out, traj);
    std::istringstream in(out.str());
    const auto back = parse_trajectory(in, 0.5);
    CHECK(back.states == traj.states);
    CHECK(back.n == 3);
}

TEST_CASE("format_double survives a parse round trip bit-exactly") {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 500; ++trial) {
        double v = uniform(rng, -1.0, 1.0) *
                   std::pow(10.0, uniform(rng, -12.0, 12.0));
        const double back = std::strtod(format_double(v).c_str(), nullptr);
        CHECK(back == v);
    }
}

TEST_CASE("emit_report JSON carries the full schema and exact numbers") {
    const auto p = validate_stochastic(example4());
    const auto report = reversible_embedding(p);
    const std::string text = emit_report(report, FileFormat::Json);

    const auto doc = nlohmann::json::parse(text);
    for (const char *key :
         {"n", "verdict", "reasons", "invariant_distribution", "eigenvalues",
          "distinct_eigenvalues", "coefficients", "generator",
          "failing_entries", "residual_expm", "crosscheck_gap", "warnings"}) {
        CHECK(doc.contains(key));
    }
    CHECK(doc["verdict"] == "Embeddable");
    CHECK(doc["n"] == 3);
    CHECK(doc["distinct_eigenvalues"].size() == 2);
    CHECK(doc["distinct_eigenvalues"][1]["multiplicity"] == 2);

    const auto &gen = doc["generator"];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(gen[i][j].get<double>() == (*report.generator)(i, j));
        }
    }
}

TEST_CASE("emit_report JSON for a failing verdict") {
    const auto report = reversible_embedding(validate_stochastic(example3()));
    const auto doc =
        nlohmann::json::parse(emit_report(report, FileFormat::Json));
    CHECK(doc["verdict"] == "NegativeOffDiagonal");
    CHECK(doc["generator"].is_null());
    REQUIRE_FALSE(doc["failing_entries"].empty());
    CHECK(doc["failing_entries"][0]["row"] == 0);
    CHECK(doc["failing_entries"][0]["col"] == 2);

    const auto r1 = reversible_embedding(validate_stochastic(example1()));
    const auto doc1 =
        nlohmann::json::parse(emit_report(r1, FileFormat::Json));
    CHECK(doc1["verdict"] == "NotReversible");
    CHECK(doc1["eigenvalues"].is_null());
}

TEST_CASE("emit_report CSV: generator rows re-parse bit-exactly") {
    const auto report = reversible_embedding(validate_stochastic(example4()));
    const std::string text = emit_report(report, FileFormat::Csv);
    std::istringstream in(text);
    const Matrix back = parse_matrix_csv(in);
    CHECK(max_abs_diff(back, report.generator->matrix()) == 0.0);
}

TEST_CASE("exit codes are a function of the verdict") {
    CHECK(exit_code(reversible_embedding(validate_stochastic(example4()))) ==
          0);
    CHECK(exit_code(reversible_embedding(validate_stochastic(example1()))) ==
          1);
    CHECK(exit_code(reversible_embedding(validate_stochastic(example2()))) ==
          1);
}

} // TEST_SUITE
