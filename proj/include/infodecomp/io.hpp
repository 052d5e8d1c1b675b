#ifndef INFODECOMP_IO_HPP
#define INFODECOMP_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <infodecomp/core.hpp>
#include <infodecomp/decomp.hpp>
#include <infodecomp/jdoc.hpp>
#include <infodecomp/oracle.hpp>

namespace infodecomp {

// ---- CSV (RFC-4180 style, UTF-8, header row) ----

struct CsvOptions {
    bool has_header = true;
};

// All non-class columns become real features; the class column becomes text
// labels mapped to alphabet indices in first-appearance order. class_column
// is a header name, or a 0-based column index when it parses as an integer
// (or when there is no header). Throws ParseError / MissingColumnError.
Dataset ingest_csv(const std::string& path, const std::string& class_column, const CsvOptions& options = {});

void write_dataset_csv(const Dataset& dataset, const std::string& path, const std::string& class_column = "class");

// ---- GmmSpec file (same conventions as the report: ordered keys, 17
// significant digits, covariances as row-major lists of rows) ----

JDoc gmm_to_json(const oracle::GmmSpec& spec);
void write_gmm_spec(const oracle::GmmSpec& spec, const std::string& path);
oracle::GmmSpec read_gmm_spec(const std::string& path);

// ---- Report ----

struct ReportHeader {
    std::string kind;     // analyze | batch | bootstrap | oracle
    std::string command;  // reassembled argv
    EstimatorConfig config;
    int threads = 1;
    std::optional<std::string> scenario;
    std::optional<std::string> input;
    std::optional<int> repeats;
    std::optional<double> tol;  // oracle runs
};

JDoc trace_to_json(const SearchTrace& trace);
JDoc result_to_json(const DecompositionResult& r, const std::vector<std::string>& feature_names);
JDoc aggregate_to_json(const Aggregate& agg);

// Assembles the document; results/aggregate/oracle sections may be empty.
JDoc build_report(const ReportHeader& header, const std::vector<std::string>& feature_names,
                  const std::vector<DecompositionResult>& results, const Aggregate* aggregate,
                  const std::vector<DecompositionResult>* oracle_results);

// Stamps the timestamp and the determinism hash (computed over the payload
// with timestamp, command and thread count neutralized, so reruns of the
// same analysis compare equal regardless of wall clock or pool size) and
// returns the rendered text.
std::string finalize_report(JDoc report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV exports of the aggregate tables: <prefix>components.csv,
// <prefix>selection_min.csv, <prefix>selection_max.csv, <prefix>order_min.csv,
// <prefix>order_max.csv.
void write_aggregate_tables(const Aggregate& agg, const std::string& prefix);

}  // namespace infodecomp

#endif  // INFODECOMP_IO_HPP
