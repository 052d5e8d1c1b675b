#include <infodecomp/io.hpp>

#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <infodecomp/version.hpp>

namespace infodecomp {

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
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
            if (!cur.empty()) throw ParseError(line_no, fields.size() + 1, "unexpected quote inside field");
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError(line_no, fields.size() + 1, "unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';  // doubled quote escapes itself
        out += c;
    }
    out += '"';
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

}  // namespace

Dataset ingest_csv(const std::string& path, const std::string& class_column, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line, line_no));
    }
    if (rows.empty()) throw Error("empty input file: " + path);

    const std::size_t n_cols = rows.front().size();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != n_cols)
            throw ParseError(r + 1, rows[r].size(), "row has " + std::to_string(rows[r].size()) +
                                                        " fields, expected " + std::to_string(n_cols));
    }

    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (options.has_header) {
        header = rows.front();
        for (auto& h : header) h = trim(h);
        first_data = 1;
    } else {
        for (std::size_t c = 0; c < n_cols; ++c) header.push_back("c" + std::to_string(c));
    }

    // class column: resolved by header name first, then as a 0-based index
    std::size_t class_idx = n_cols;
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (header[c] == class_column) {
            class_idx = c;
            break;
        }
    }
    if (class_idx == n_cols) {
        int idx = -1;
        const auto [p, ec] = std::from_chars(class_column.data(), class_column.data() + class_column.size(), idx);
        if (ec == std::errc() && p == class_column.data() + class_column.size() && idx >= 0 &&
            static_cast<std::size_t>(idx) < n_cols) {
            class_idx = static_cast<std::size_t>(idx);
        } else {
            throw MissingColumnError(class_column);
        }
    }
    if (n_cols < 2) throw Error("need at least one feature column besides the class column");

    Dataset ds;
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (c != class_idx) ds.feature_names.push_back(header[c]);
    }
    ds.features.assign(ds.feature_names.size(), {});
    const std::size_t n = rows.size() - first_data;
    for (auto& col : ds.features) col.reserve(n);
    ds.labels.reserve(n);

    for (std::size_t r = first_data; r < rows.size(); ++r) {
        std::size_t f = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            const std::string cell = trim(rows[r][c]);
            if (c == class_idx) {
                int idx = -1;
                for (std::size_t a = 0; a < ds.class_alphabet.size(); ++a) {
                    if (ds.class_alphabet[a] == cell) {
                        idx = static_cast<int>(a);
                        break;
                    }
                }
                if (idx < 0) {
                    idx = static_cast<int>(ds.class_alphabet.size());
                    ds.class_alphabet.push_back(cell);
                }
                ds.labels.push_back(idx);
            } else {
                double value = 0.0;
                const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
                if (ec != std::errc() || p != cell.data() + cell.size())
                    throw ParseError(r + 1, c + 1, "not a real number: '" + cell + "'");
                ds.features[f].push_back(value);
                ++f;
            }
        }
    }
    return ds;
}

void write_dataset_csv(const Dataset& dataset, const std::string& path, const std::string& class_column) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);

    for (const auto& name : dataset.feature_names) out << csv_escape(name) << ',';
    out << csv_escape(class_column) << '\n';

    char buf[40];
    for (std::size_t i = 0; i < dataset.n_samples(); ++i) {
        for (std::size_t c = 0; c < dataset.n_features(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", dataset.features[c][i]);
            out << buf << ',';
        }
        out << csv_escape(dataset.class_alphabet[dataset.labels[i]]) << '\n';
    }
    if (!out) throw Error("failed writing: " + path);
}

JDoc gmm_to_json(const oracle::GmmSpec& spec) {
    JDoc root = JDoc::object();
    root.set("format", JDoc::string("infodecomp-gmm/1"));
    JDoc names = JDoc::array();
    for (const auto& n : spec.feature_names) names.push(JDoc::string(n));
    root.set("feature_names", std::move(names));
    JDoc classes = JDoc::array();
    for (const auto& c : spec.classes) {
        JDoc jc = JDoc::object();
        jc.set("prior", JDoc::real(c.prior));
        JDoc mean = JDoc::array();
        for (double v : c.mean) mean.push(JDoc::real(v));
        jc.set("mean", std::move(mean));
        JDoc cov = JDoc::array();
        for (const auto& row : c.cov) {
            JDoc jrow = JDoc::array();
            for (double v : row) jrow.push(JDoc::real(v));
            cov.push(std::move(jrow));
        }
        jc.set("cov", std::move(cov));
        classes.push(std::move(jc));
    }
    root.set("classes", std::move(classes));
    return root;
}

void write_gmm_spec(const oracle::GmmSpec& spec, const std::string& path) {
    write_text_file(path, gmm_to_json(spec).render());
}

oracle::GmmSpec read_gmm_spec(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("cannot parse GmmSpec file " + path + ": " + e.what());
    }
    oracle::GmmSpec spec;
    try {
        for (const auto& n : j.at("feature_names")) spec.feature_names.push_back(n.get<std::string>());
        for (const auto& jc : j.at("classes")) {
            oracle::GmmClass c;
            c.prior = jc.at("prior").get<double>();
            for (const auto& v : jc.at("mean")) c.mean.push_back(v.get<double>());
            for (const auto& row : jc.at("cov")) {
                c.cov.emplace_back();
                for (const auto& v : row) c.cov.back().push_back(v.get<double>());
            }
            spec.classes.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed GmmSpec file " + path + ": " + e.what());
    }
    spec.check();
    return spec;
}

JDoc trace_to_json(const SearchTrace& trace) {
    JDoc jt = JDoc::object();
    JDoc iters = JDoc::array();
    for (const auto& it : trace.iterations) {
        JDoc ji = JDoc::object();
        JDoc scores = JDoc::array();
        for (const auto& [feature, value] : it.candidate_scores) {
            JDoc pair = JDoc::array();
            pair.push(JDoc::integer(feature));
            pair.push(JDoc::real(value));
            scores.push(std::move(pair));
        }
        ji.set("candidate_scores", std::move(scores));
        ji.set("selected", it.selected ? JDoc::integer(*it.selected) : JDoc());
        ji.set("cmi_before", JDoc::real(it.cmi_before));
        ji.set("cmi_after", JDoc::real(it.cmi_after));
        ji.set("surrogate_threshold", JDoc::real(it.surrogate_threshold));
        ji.set("accepted", JDoc::boolean(it.accepted));
        iters.push(std::move(ji));
    }
    jt.set("iterations", std::move(iters));
    return jt;
}

JDoc result_to_json(const DecompositionResult& r, const std::vector<std::string>& feature_names) {
    JDoc jr = JDoc::object();
    jr.set("source_index", JDoc::integer(r.source_index));
    jr.set("feature", JDoc::string(feature_names[static_cast<std::size_t>(r.source_index)]));
    jr.set("mi", JDoc::real(r.mi));
    jr.set("mi_significant", JDoc::boolean(r.mi_significant));
    jr.set("cmi_zmin", JDoc::real(r.cmi_zmin));
    jr.set("cmi_zmax", JDoc::real(r.cmi_zmax));
    jr.set("unique", JDoc::real(r.unique));
    jr.set("redundant", JDoc::real(r.redundant));
    jr.set("synergistic", JDoc::real(r.synergistic));
    JDoc zmin = JDoc::array(), zmax = JDoc::array();
    for (int f : r.zmin) zmin.push(JDoc::integer(f));
    for (int f : r.zmax) zmax.push(JDoc::integer(f));
    jr.set("zmin", std::move(zmin));
    jr.set("zmax", std::move(zmax));
    jr.set("trace_min", trace_to_json(r.trace_min));
    jr.set("trace_max", trace_to_json(r.trace_max));
    return jr;
}

namespace {

JDoc stats_to_json(const std::vector<Stat>& stats) {
    JDoc arr = JDoc::array();
    for (const auto& s : stats) {
        JDoc js = JDoc::object();
        js.set("mean", JDoc::real(s.mean));
        js.set("sd", JDoc::real(s.sd));
        arr.push(std::move(js));
    }
    return arr;
}

JDoc pct_matrix_to_json(const std::vector<std::vector<double>>& mat) {
    JDoc arr = JDoc::array();
    for (const auto& row : mat) {
        JDoc jrow = JDoc::array();
        for (double v : row) jrow.push(JDoc::real(v));
        arr.push(std::move(jrow));
    }
    return arr;
}

}  // namespace

JDoc aggregate_to_json(const Aggregate& agg) {
    JDoc ja = JDoc::object();
    ja.set("n_repeats", JDoc::integer(static_cast<long long>(agg.n_repeats)));
    JDoc stats = JDoc::object();
    stats.set("mi", stats_to_json(agg.mi));
    stats.set("cmi_zmin", stats_to_json(agg.cmi_zmin));
    stats.set("cmi_zmax", stats_to_json(agg.cmi_zmax));
    stats.set("unique", stats_to_json(agg.unique));
    stats.set("redundant", stats_to_json(agg.redundant));
    stats.set("synergistic", stats_to_json(agg.synergistic));
    ja.set("stats", std::move(stats));
    JDoc sig = JDoc::array();
    for (double v : agg.mi_significant_pct) sig.push(JDoc::real(v));
    ja.set("mi_significant_pct", std::move(sig));
    ja.set("zmin_freq_pct", pct_matrix_to_json(agg.zmin_freq_pct));
    ja.set("zmax_freq_pct", pct_matrix_to_json(agg.zmax_freq_pct));
    JDoc omin = JDoc::array(), omax = JDoc::array();
    for (const auto& per_iter : agg.order_min_pct) omin.push(pct_matrix_to_json(per_iter));
    for (const auto& per_iter : agg.order_max_pct) omax.push(pct_matrix_to_json(per_iter));
    ja.set("order_min_pct", std::move(omin));
    ja.set("order_max_pct", std::move(omax));
    return ja;
}

JDoc build_report(const ReportHeader& header, const std::vector<std::string>& feature_names,
                  const std::vector<DecompositionResult>& results, const Aggregate* aggregate,
                  const std::vector<DecompositionResult>* oracle_results) {
    JDoc root = JDoc::object();
    root.set("format", JDoc::string("infodecomp-report/1"));
    root.set("kind", JDoc::string(header.kind));

    JDoc meta = JDoc::object();
    meta.set("tool", JDoc::string(kToolName));
    meta.set("version", JDoc::string(kToolVersion));
    meta.set("timestamp", JDoc::string(""));
    meta.set("command", JDoc::string(header.command));
    meta.set("threads", JDoc::integer(header.threads));
    meta.set("seed", JDoc::integer(static_cast<long long>(header.config.seed)));
    JDoc cfg = JDoc::object();
    cfg.set("k", JDoc::integer(header.config.k));
    cfg.set("n_surrogates", JDoc::integer(header.config.n_surrogates));
    cfg.set("alpha", JDoc::real(header.config.alpha));
    cfg.set("standardize", JDoc::boolean(header.config.standardize));
    cfg.set("jitter_scale", JDoc::real(header.config.jitter_scale));
    cfg.set("mc_samples", JDoc::integer(header.config.mc_samples));
    meta.set("config", std::move(cfg));
    if (header.scenario) meta.set("scenario", JDoc::string(*header.scenario));
    if (header.input) meta.set("input", JDoc::string(*header.input));
    if (header.repeats) meta.set("repeats", JDoc::integer(*header.repeats));
    if (header.tol) meta.set("tol", JDoc::real(*header.tol));
    root.set("metadata", std::move(meta));

    JDoc names = JDoc::array();
    for (const auto& n : feature_names) names.push(JDoc::string(n));
    root.set("feature_names", std::move(names));

    if (!results.empty()) {
        JDoc jr = JDoc::array();
        for (const auto& r : results) jr.push(result_to_json(r, feature_names));
        root.set("results", std::move(jr));
    }
    if (aggregate) root.set("aggregate", aggregate_to_json(*aggregate));
    if (oracle_results) {
        JDoc jo = JDoc::array();
        for (const auto& r : *oracle_results) jo.push(result_to_json(r, feature_names));
        root.set("oracle", std::move(jo));
    }
    root.set("determinism_hash", JDoc::string(""));
    return root;
}

namespace {

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

std::string finalize_report(JDoc report) {
    // hash the payload with run-environment fields neutralized: the same
    // analysis gives the same hash regardless of wall clock, command line
    // spelling, or worker-pool size
    JDoc for_hash = report;
    if (JDoc* meta = for_hash.find("metadata")) {
        meta->set("timestamp", JDoc::string(""));
        meta->set("command", JDoc::string(""));
        meta->set("threads", JDoc::integer(0));
    }
    for_hash.set("determinism_hash", JDoc::string(""));
    const std::string hash = fnv1a64_hex(for_hash.render());

    if (JDoc* meta = report.find("metadata")) meta->set("timestamp", JDoc::string(iso_timestamp()));
    report.set("determinism_hash", JDoc::string("fnv1a64:" + hash));
    return report.render();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
    if (!out) throw Error("failed writing: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_aggregate_tables(const Aggregate& agg, const std::string& prefix) {
    const std::size_t m = agg.feature_names.size();
    {
        std::string csv = "feature,mi_mean,mi_sd,cmi_zmin_mean,cmi_zmin_sd,cmi_zmax_mean,cmi_zmax_sd,"
                          "unique_mean,unique_sd,redundant_mean,redundant_sd,synergistic_mean,synergistic_sd,"
                          "mi_significant_pct\n";
        for (std::size_t f = 0; f < m; ++f) {
            csv += csv_escape(agg.feature_names[f]) + ',' + real17(agg.mi[f].mean) + ',' + real17(agg.mi[f].sd) +
                   ',' + real17(agg.cmi_zmin[f].mean) + ',' + real17(agg.cmi_zmin[f].sd) + ',' +
                   real17(agg.cmi_zmax[f].mean) + ',' + real17(agg.cmi_zmax[f].sd) + ',' +
                   real17(agg.unique[f].mean) + ',' + real17(agg.unique[f].sd) + ',' +
                   real17(agg.redundant[f].mean) + ',' + real17(agg.redundant[f].sd) + ',' +
                   real17(agg.synergistic[f].mean) + ',' + real17(agg.synergistic[f].sd) + ',' +
                   real17(agg.mi_significant_pct[f]) + '\n';
        }
        write_text_file(prefix + "components.csv", csv);
    }
    const auto write_matrix = [&](const std::vector<std::vector<double>>& mat, const std::string& path) {
        std::string csv = "source";
        for (const auto& n : agg.feature_names) csv += ',' + csv_escape(n);
        csv += '\n';
        for (std::size_t s = 0; s < m; ++s) {
            csv += csv_escape(agg.feature_names[s]);
            for (std::size_t f = 0; f < m; ++f) csv += ',' + real17(mat[s][f]);
            csv += '\n';
        }
        write_text_file(path, csv);
    };
    write_matrix(agg.zmin_freq_pct, prefix + "selection_min.csv");
    write_matrix(agg.zmax_freq_pct, prefix + "selection_max.csv");

    const auto write_order = [&](const std::vector<std::vector<std::vector<double>>>& order,
                                 const std::string& path) {
        std::string csv = "source,iteration,selected,pct\n";
        for (std::size_t s = 0; s < m; ++s) {
            for (std::size_t j = 0; j < order[s].size(); ++j) {
                for (std::size_t f = 0; f < m; ++f) {
                    if (order[s][j][f] == 0.0) continue;
                    csv += csv_escape(agg.feature_names[s]) + ',' + std::to_string(j + 1) + ',' +
                           csv_escape(agg.feature_names[f]) + ',' + real17(order[s][j][f]) + '\n';
                }
            }
        }
        write_text_file(path, csv);
    };
    write_order(agg.order_min_pct, prefix + "order_min.csv");
    write_order(agg.order_max_pct, prefix + "order_max.csv");
}

}  // namespace infodecomp
