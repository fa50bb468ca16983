#include <stdexcept>
#include <fstream>
#include <string>
#include <vector>

#include "damex/csv.hpp"
#include "damex/errors.hpp"
#include "doctest.h"
#include "support/temp_dir.hpp"

using damex::CsvReadOptions;
using damex::Dataset;
using damex::read_csv;
using damex::read_csv_table;
using damex::write_csv;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("write then read reproduces values bit for bit") {
    const testsupport::TempDir dir("csv");
    const std::vector<double> values{
        1.0 / 3.0, 0.1,     -2.5e-300, 12345.678901234567,
        1e300,     -0.0,    7.0,       2.2250738585072014e-308,
        99.25,     -1e-12,  3.141592653589793, 0.49999999999999994,
    };
    const Dataset data(values, 4, 3, std::nullopt, {"a", "b", "c"});
    const std::string path = dir.file("data.csv");
    write_csv(data, path);

    const Dataset back = read_csv(path);
    REQUIRE(back.rows() == 4);
    REQUIRE(back.cols() == 3);
    CHECK(back.values() == values);
    CHECK(back.feature_names() == std::vector<std::string>{"a", "b", "c"});
    CHECK_FALSE(back.has_labels());
}

TEST_CASE("labels ride along in a trailing column") {
    const testsupport::TempDir dir("csv-labels");
    const Dataset data({1.5, 2.5, 3.5, 4.5}, 2, 2, std::vector<int>{1, 0});
    const std::string path = dir.file("labeled.csv");
    write_csv(data, path);

    // Unnamed features get f1..fd, labels the "label" column.
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "f1,f2,label");

    const Dataset back = read_csv(path, CsvReadOptions{.label_column = 3});
    CHECK(back.values() == data.values());
    REQUIRE(back.has_labels());
    CHECK(back.labels() == std::vector<int>{1, 0});
}

TEST_CASE("label column may sit anywhere") {
    const testsupport::TempDir dir("csv-mid");
    const std::string path = dir.file("mid.csv");
    write_file(path, "a,label,b\n1,1,2\n3,0,4\n");
    const Dataset data = read_csv(path, CsvReadOptions{.label_column = 2});
    CHECK(data.cols() == 2);
    CHECK(data.values() == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(data.labels() == std::vector<int>{1, 0});
    CHECK(data.feature_names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("header-only files parse to an empty table") {
    const testsupport::TempDir dir("csv-empty");
    const std::string path = dir.file("empty.csv");
    write_file(path, "x,y\n");
    const auto table = read_csv_table(path);
    CHECK(table.empty());
    CHECK(table.feature_names == std::vector<std::string>{"x", "y"});
    CHECK_THROWS_WITH_AS(table.to_dataset(), "empty dataset", std::invalid_argument);
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
    const testsupport::TempDir dir("csv-crlf");
    const std::string path = dir.file("crlf.csv");
    write_file(path, "x,y\r\n\r\n1,2\r\n\n3,4\r\n");
    const Dataset data = read_csv(path);
    CHECK(data.rows() == 2);
    CHECK(data.values() == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("parse failures carry the 1-based file location") {
    const testsupport::TempDir dir("csv-errors");
    const std::string path = dir.file("bad.csv");

    write_file(path, "x,y\n1,2\n3,oops\n");
    CHECK_THROWS_WITH_AS(read_csv(path), "invalid number at (row 3, col 2)", damex::parse_error);

    write_file(path, "x,y\n1,2\n3,inf\n");
    CHECK_THROWS_WITH_AS(read_csv(path), "invalid value at (row 3, col 2)", damex::parse_error);

    write_file(path, "x,y\n1,2,9\n");
    CHECK_THROWS_WITH_AS(read_csv(path), "inconsistent dimension at (row 2, col 3)",
                         damex::parse_error);

    write_file(path, "x,y\n1\n");
    CHECK_THROWS_WITH_AS(read_csv(path), "inconsistent dimension at (row 2, col 2)",
                         damex::parse_error);

    write_file(path, "");
    CHECK_THROWS_WITH_AS(read_csv(path), "missing header row at (row 1, col 1)",
                         damex::parse_error);

    write_file(path, "x,y\n1,2\n");
    CHECK_THROWS_WITH_AS(read_csv(path, CsvReadOptions{.label_column = 3}),
                         "label column out of range at (row 1, col 3)", damex::parse_error);

    write_file(path, "label\n1\n");
    CHECK_THROWS_WITH_AS(read_csv(path, CsvReadOptions{.label_column = 1}),
                         "no feature columns at (row 1, col 1)", damex::parse_error);

    write_file(path, "x,label\n1,2\n");
    CHECK_THROWS_WITH_AS(read_csv(path, CsvReadOptions{.label_column = 2}),
                         "labels must be 0 or 1 at (row 2, col 2)", damex::parse_error);

    CHECK_THROWS_AS(read_csv(dir.file("missing.csv")), damex::io_error);
}

TEST_CASE("empty fields are invalid numbers") {
    const testsupport::TempDir dir("csv-hole");
    const std::string path = dir.file("hole.csv");
    write_file(path, "x,y\n1,\n");
    CHECK_THROWS_WITH_AS(read_csv(path), "invalid number at (row 2, col 2)", damex::parse_error);
}
