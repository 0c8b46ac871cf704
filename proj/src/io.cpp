#include "opideal/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "opideal/errors.hpp"

namespace opideal::io {

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& what)
{
    throw Error(ErrorCode::Schema, "schema violation at '" + field + "': " + what);
}

const json& field(const json& j, const char* name, const std::string& context)
{
    if (!j.is_object()) schema(context, "expected an object");
    const auto it = j.find(name);
    if (it == j.end()) schema(context + "." + name, "missing field");
    return *it;
}

int positive_int(const json& j, const std::string& name)
{
    if (!j.is_number_integer() || j.get<long long>() < 1) schema(name, "expected a positive integer");
    return j.get<int>();
}

Complex complex_from_json(const json& v, const std::string& name)
{
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    schema(name, "expected a number or a [re, im] pair");
}

} // namespace

json real_to_json(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

json matrix_to_json(const CMatrix& m)
{
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back({m(i, j).real(), m(i, j).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j)
{
    const int rows = positive_int(field(j, "rows", "matrix"), "matrix.rows");
    const int cols = positive_int(field(j, "cols", "matrix"), "matrix.cols");
    const json& data = field(j, "data", "matrix");
    if (!data.is_array()) schema("matrix.data", "expected an array");
    if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        schema("matrix.data", "expected rows*cols = " + std::to_string(rows * cols) + " entries, got " +
                                  std::to_string(data.size()));
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c) {
            const std::size_t k = static_cast<std::size_t>(i) * cols + c;
            m(i, c) = complex_from_json(data[k], "matrix.data[" + std::to_string(k) + "]");
        }
    require_finite(m, "matrix");
    return m;
}

json flag_to_json(const Flag& f)
{
    return {{"basis", matrix_to_json(f.basis())},
            {"dims", std::vector<int>(f.dims().begin(), f.dims().end())}};
}

Flag flag_from_json(const json& j)
{
    CMatrix basis = matrix_from_json(field(j, "basis", "flag"));
    const json& dims = field(j, "dims", "flag");
    if (!dims.is_array()) schema("flag.dims", "expected an array of integers");
    std::vector<int> d;
    for (const auto& v : dims) {
        if (!v.is_number_integer()) schema("flag.dims", "expected integers");
        d.push_back(v.get<int>());
    }
    return Flag(std::move(basis), std::move(d));
}

json group_to_json(const FiniteGroup& g)
{
    return {{"order", g.order()}, {"table", g.table()}, {"labels", g.labels()}};
}

FiniteGroup group_from_json(const json& j)
{
    const int order = positive_int(field(j, "order", "group"), "group.order");
    const json& table = field(j, "table", "group");
    if (!table.is_array() || table.size() != static_cast<std::size_t>(order))
        schema("group.table", "expected order rows");
    std::vector<std::vector<int>> t;
    for (std::size_t r = 0; r < table.size(); ++r) {
        const auto& row = table[r];
        if (!row.is_array()) schema("group.table[" + std::to_string(r) + "]", "expected an array");
        std::vector<int> out;
        for (const auto& v : row) {
            if (!v.is_number_integer()) schema("group.table[" + std::to_string(r) + "]", "expected integers");
            out.push_back(v.get<int>());
        }
        t.push_back(std::move(out));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        for (const auto& v : j.at("labels")) {
            if (!v.is_string()) schema("group.labels", "expected strings");
            labels.push_back(v.get<std::string>());
        }
    }
    return FiniteGroup(std::move(t), std::move(labels));
}

json functional_to_json(const Functional& f)
{
    json w = json::array();
    for (Eigen::Index i = 0; i < f.weights.size(); ++i) w.push_back({f.weights(i).real(), f.weights(i).imag()});
    return {{"weights", std::move(w)}};
}

Functional functional_from_json(const json& j)
{
    const json& w = field(j, "weights", "functional");
    if (!w.is_array() || w.empty()) schema("functional.weights", "expected a nonempty array");
    Functional f{CVector(static_cast<Eigen::Index>(w.size()))};
    for (std::size_t i = 0; i < w.size(); ++i)
        f.weights(static_cast<Eigen::Index>(i)) =
            complex_from_json(w[i], "functional.weights[" + std::to_string(i) + "]");
    return f;
}

std::pair<ClassicalType, StructureData> structure_from_json(const json& j)
{
    const json& type = field(j, "type", "structure");
    if (!type.is_string()) schema("structure.type", "expected a string");
    const auto t = parse_classical_type(type.get<std::string>());
    const int n = positive_int(field(j, "n", "structure"), "structure.n");
    std::optional<Signature> split;
    if (j.contains("split")) {
        const auto& s = j.at("split");
        if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
            schema("structure.split", "expected [p, q]");
        split = Signature{s[0].get<int>(), s[1].get<int>()};
    }
    return {t, StructureData::standard(t, n, split)};
}

std::vector<double> parse_sequence_csv(const std::string& text)
{
    std::vector<double> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r,");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r,");
        const std::string token = line.substr(first, last - first + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || !std::isfinite(v) || v < 0.0)
            schema("sequence line " + std::to_string(lineno), "expected one nonnegative real");
        out.push_back(v);
    }
    return out;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path)
{
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, "'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << text;
}

} // namespace opideal::io
