#include "jsnet/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace jsnet::io {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RangeError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RangeError("cannot open file for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw RangeError("write failed: " + path.string());
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    size_t begin = 0;
    while (begin <= text.size()) {
        size_t end = text.find('\n', begin);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        if (end == text.size()) break;
        begin = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> fields;
    size_t begin = 0;
    while (true) {
        const size_t end = line.find(delim, begin);
        if (end == std::string::npos) {
            fields.push_back(line.substr(begin));
            break;
        }
        fields.push_back(line.substr(begin, end - begin));
        begin = end + 1;
    }
    return fields;
}

double parse_double(const std::string& field, long line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("bad number '" + field + "'", line_no);
    }
    if (!std::isfinite(value)) throw ParseError("non-finite value '" + field + "'", line_no);
    return value;
}

int parse_label(const std::string& field, long line_no) {
    int value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("bad label '" + field + "'", line_no);
    }
    return value;
}

bool parses_as_double(const std::string& field) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

}  // namespace

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    if (lines.empty()) throw ParseError("empty file: " + path.string());

    const std::vector<std::string> header = split_fields(lines[0], ',');
    if (header.empty() || header[0] != "label") {
        throw ParseError("header must start with 'label'", 1);
    }
    const auto d = static_cast<Eigen::Index>(header.size()) - 1;
    if (d < 1) throw ParseError("header must list at least one feature column", 1);
    if (lines.size() < 2) throw ParseError("no data rows in " + path.string());

    LabeledDataset data;
    data.X.resize(static_cast<Eigen::Index>(lines.size()) - 1, d);
    data.labels.reserve(lines.size() - 1);
    int max_label = 0;
    for (size_t ln = 1; ln < lines.size(); ++ln) {
        const long line_no = static_cast<long>(ln) + 1;
        if (lines[ln].empty()) throw ParseError("empty row", line_no);
        const std::vector<std::string> fields = split_fields(lines[ln], ',');
        if (static_cast<Eigen::Index>(fields.size()) != d + 1) {
            throw ParseError("expected " + std::to_string(d + 1) + " fields, got " +
                             std::to_string(fields.size()), line_no);
        }
        const int label = parse_label(fields[0], line_no);
        if (label < 1) throw LabelError("line " + std::to_string(line_no) + ": label " +
                                        std::to_string(label) + " is not positive");
        data.labels.push_back(label);
        max_label = std::max(max_label, label);
        for (Eigen::Index i = 0; i < d; ++i) {
            data.X(static_cast<Eigen::Index>(ln) - 1, i) =
                parse_double(fields[static_cast<size_t>(i) + 1], line_no);
        }
    }
    data.num_classes = max_label;
    validate(data);  // LabelError when labels are not contiguous 1..C
    return data;
}

void save_dataset(const LabeledDataset& data, const std::filesystem::path& path) {
    if (static_cast<Eigen::Index>(data.labels.size()) != data.X.rows()) {
        throw RangeError("save_dataset: label count does not match row count");
    }
    std::string out = "label";
    for (Eigen::Index i = 0; i < data.X.cols(); ++i) out += ",x" + std::to_string(i + 1);
    out += "\n";
    for (Eigen::Index n = 0; n < data.X.rows(); ++n) {
        out += std::to_string(data.labels[static_cast<size_t>(n)]);
        for (Eigen::Index i = 0; i < data.X.cols(); ++i) {
            out += ",";
            out += format_value(data.X(n, i));
        }
        out += "\n";
    }
    write_file(path, out);
}

Eigen::MatrixXd load_matrix(const std::filesystem::path& path) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    if (lines.empty()) throw ParseError("empty file: " + path.string());

    const char delim = lines[0].find('\t') != std::string::npos ? '\t' : ',';
    size_t first_row = 0;
    {
        const std::vector<std::string> fields = split_fields(lines[0], delim);
        const bool numeric = std::all_of(fields.begin(), fields.end(), parses_as_double);
        if (!numeric) first_row = 1;
    }
    if (first_row >= lines.size()) throw ParseError("no data rows in " + path.string());

    const auto cols =
        static_cast<Eigen::Index>(split_fields(lines[first_row], delim).size());
    Eigen::MatrixXd M(static_cast<Eigen::Index>(lines.size() - first_row), cols);
    for (size_t ln = first_row; ln < lines.size(); ++ln) {
        const long line_no = static_cast<long>(ln) + 1;
        const std::vector<std::string> fields = split_fields(lines[ln], delim);
        if (static_cast<Eigen::Index>(fields.size()) != cols) {
            throw ParseError("expected " + std::to_string(cols) + " fields, got " +
                             std::to_string(fields.size()), line_no);
        }
        for (Eigen::Index i = 0; i < cols; ++i) {
            M(static_cast<Eigen::Index>(ln - first_row), i) =
                parse_double(fields[static_cast<size_t>(i)], line_no);
        }
    }
    return M;
}

namespace {

constexpr int kFormatVersion = 1;

nlohmann::json provenance_json(const ModelProvenance& provenance) {
    return {{"seed", provenance.seed}, {"config_digest", provenance.config_digest}};
}

ModelProvenance provenance_from_json(const nlohmann::json& j) {
    ModelProvenance p;
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("config_digest")) p.config_digest = j.at("config_digest").get<std::string>();
    return p;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void save_model(const WeightSet& weights, const ModelProvenance& provenance,
                const std::filesystem::path& path) {
    validate(weights);
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "johnson_net";
    j["family"] = to_string(weights.family);
    j["C"] = weights.C;
    j["d"] = weights.d;
    nlohmann::json classes = nlohmann::json::array();
    for (int c = 0; c < weights.C; ++c) {
        const auto uc = static_cast<size_t>(c);
        const auto& W1 = weights.W1[uc];
        const auto& W2 = weights.W2[uc];
        std::vector<double> w1_row0(static_cast<size_t>(weights.d));
        std::vector<double> w1_diag(static_cast<size_t>(weights.d));
        std::vector<double> w2_row0(static_cast<size_t>(weights.d));
        std::vector<double> w2_diag(static_cast<size_t>(weights.d));
        for (int i = 0; i < weights.d; ++i) {
            w1_row0[static_cast<size_t>(i)] = W1(0, i);
            w1_diag[static_cast<size_t>(i)] = W1(i + 1, i);
            w2_row0[static_cast<size_t>(i)] = W2(0, i);
            w2_diag[static_cast<size_t>(i)] = W2(i + 1, i);
        }
        classes.push_back({{"w1_row0", w1_row0},
                           {"w1_diag", w1_diag},
                           {"w2_row0", w2_row0},
                           {"w2_diag", w2_diag},
                           {"w3", to_std(weights.W3[uc])}});
    }
    j["classes"] = std::move(classes);
    j["provenance"] = provenance_json(provenance);
    write_file(path, j.dump(2) + "\n");
}

void save_model(const LlrModel& model, const ModelProvenance& provenance,
                const std::filesystem::path& path) {
    if (model.B.rows() != model.C || model.B.cols() != model.d + 1) {
        throw RangeError("save_model: llr B has wrong shape");
    }
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "llr";
    j["C"] = model.C;
    j["d"] = model.d;
    nlohmann::json rows = nlohmann::json::array();
    for (int c = 0; c < model.C; ++c) {
        rows.push_back(to_std(model.B.row(c).transpose()));
    }
    j["B"] = std::move(rows);
    j["provenance"] = provenance_json(provenance);
    write_file(path, j.dump(2) + "\n");
}

LoadedModel load_model(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        if (j.at("format_version").get<int>() != kFormatVersion) {
            throw ParseError("unsupported format_version in " + path.string());
        }
        const std::string kind = j.at("kind").get<std::string>();
        LoadedModel loaded;
        if (j.contains("provenance")) {
            loaded.provenance = provenance_from_json(j.at("provenance"));
        }
        if (kind == "johnson_net") {
            WeightSet w;
            w.family = family_from_string(j.at("family").get<std::string>());
            w.C = j.at("C").get<int>();
            w.d = j.at("d").get<int>();
            if (w.C < 1 || w.d < 1) throw ParseError("model has invalid C or d");
            const int H = expansion_size(w.d);
            for (const auto& cls : j.at("classes")) {
                const auto w1_row0 = cls.at("w1_row0").get<std::vector<double>>();
                const auto w1_diag = cls.at("w1_diag").get<std::vector<double>>();
                const auto w2_row0 = cls.at("w2_row0").get<std::vector<double>>();
                const auto w2_diag = cls.at("w2_diag").get<std::vector<double>>();
                const auto w3 = cls.at("w3").get<std::vector<double>>();
                const auto ud = static_cast<size_t>(w.d);
                if (w1_row0.size() != ud || w1_diag.size() != ud || w2_row0.size() != ud ||
                    w2_diag.size() != ud || w3.size() != static_cast<size_t>(H)) {
                    throw ParseError("model class block has wrong sizes");
                }
                Eigen::MatrixXd W1 = Eigen::MatrixXd::Zero(w.d + 1, w.d);
                Eigen::MatrixXd W2 = Eigen::MatrixXd::Zero(w.d + 1, w.d);
                for (int i = 0; i < w.d; ++i) {
                    W1(0, i) = w1_row0[static_cast<size_t>(i)];
                    W1(i + 1, i) = w1_diag[static_cast<size_t>(i)];
                    W2(0, i) = w2_row0[static_cast<size_t>(i)];
                    W2(i + 1, i) = w2_diag[static_cast<size_t>(i)];
                }
                w.W1.push_back(std::move(W1));
                w.W2.push_back(std::move(W2));
                w.W3.push_back(from_std(w3));
            }
            try {
                validate(w);
            } catch (const RangeError& e) {
                throw ParseError(std::string("invalid model: ") + e.what());
            }
            loaded.model = std::move(w);
        } else if (kind == "llr") {
            LlrModel m;
            m.C = j.at("C").get<int>();
            m.d = j.at("d").get<int>();
            if (m.C < 1 || m.d < 1) throw ParseError("model has invalid C or d");
            const auto rows = j.at("B").get<std::vector<std::vector<double>>>();
            if (rows.size() != static_cast<size_t>(m.C)) {
                throw ParseError("llr model has wrong row count");
            }
            m.B.resize(m.C, m.d + 1);
            for (int c = 0; c < m.C; ++c) {
                if (rows[static_cast<size_t>(c)].size() != static_cast<size_t>(m.d + 1)) {
                    throw ParseError("llr model row has wrong length");
                }
                m.B.row(c) = from_std(rows[static_cast<size_t>(c)]).transpose();
            }
            loaded.model = std::move(m);
        } else {
            throw ParseError("unknown model kind '" + kind + "'");
        }
        return loaded;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed model file " + path.string() + ": " + e.what());
    }
}

void write_pgm(const Eigen::MatrixXd& values, const std::filesystem::path& path) {
    if (values.rows() == 0 || values.cols() == 0) throw RangeError("write_pgm: empty image");
    std::string out = "P5\n" + std::to_string(values.cols()) + " " +
                      std::to_string(values.rows()) + "\n255\n";
    out.reserve(out.size() + static_cast<size_t>(values.rows() * values.cols()));
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            const double v = std::clamp(values(r, c), 0.0, 1.0);
            out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
        }
    }
    write_file(path, out);
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (const char ch : bytes) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace jsnet::io
