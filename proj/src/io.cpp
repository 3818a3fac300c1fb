#include "qdec/io.hpp"

#include <fstream>
#include <sstream>

namespace qdec::io {

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (long i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (long j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

namespace {

cplx entry(const json& e) {
    if (e.is_number()) return cplx(e.get<double>(), 0.0);
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return cplx(e[0].get<double>(), e[1].get<double>());
    throw InputError("matrix entry must be a number or an [re, im] pair");
}

}  // namespace

Mat matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
    // A flat list of real numbers is read as a column vector; anything else is a list of rows.
    if (j[0].is_number()) {
        Mat m(j.size(), 1);
        for (std::size_t i = 0; i < j.size(); ++i) m(i, 0) = entry(j[i]);
        return m;
    }
    const std::size_t cols = j[0].size();
    Mat m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw InputError("matrix rows have unequal lengths");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = entry(j[i][c]);
    }
    return m;
}

json space_to_json(const Space& s) {
    json out = json::array();
    for (const auto& p : s.parts()) out.push_back({p.label, p.dim});
    return out;
}

Space space_from_json(const json& j) {
    if (!j.is_array()) throw InputError("labels must be an array of [label, dim] pairs");
    std::vector<Subsystem> parts;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_number_integer())
            throw InputError("label entry must be [string, int]");
        parts.push_back({p[0].get<std::string>(), p[1].get<int>()});
    }
    try {
        return Space(parts);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

json to_json(const Ket& k) {
    return {{"labels", space_to_json(k.space())}, {"kind", "pure"}, {"matrix", matrix_to_json(Mat(k.vec()))}};
}

json to_json(const Density& d) {
    return {{"labels", space_to_json(d.space())}, {"kind", "density"}, {"matrix", matrix_to_json(d.mat())}};
}

json to_json(const Operator& o) {
    return {{"labels", space_to_json(o.out())},
            {"in_labels", space_to_json(o.in())},
            {"kind", "op"},
            {"matrix", matrix_to_json(o.mat())}};
}

json to_json(const Channel& c) {
    json ks = json::array();
    for (const auto& k : c.kraus()) ks.push_back(matrix_to_json(k));
    return {{"in", space_to_json(c.in())}, {"out", space_to_json(c.out())}, {"kraus", ks}};
}

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw InputError(std::string("missing field '") + name + "'");
    return j.at(name);
}

std::string kind_of(const json& j) {
    const auto& k = field(j, "kind");
    if (!k.is_string()) throw InputError("kind must be a string");
    return k.get<std::string>();
}

template <class F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

}  // namespace

Ket ket_from_json(const json& j) {
    if (kind_of(j) != "pure") throw InputError("expected kind 'pure'");
    Space s = space_from_json(field(j, "labels"));
    Mat m = matrix_from_json(field(j, "matrix"));
    if (m.cols() != 1) {
        if (m.rows() == 1) m.transposeInPlace();
        else throw InputError("pure state matrix must be a single column");
    }
    return guarded([&] { return Ket(s, m.col(0)); });
}

Density density_from_json(const json& j) {
    const auto kind = kind_of(j);
    if (kind == "pure") return to_density(ket_from_json(j));
    if (kind != "density") throw InputError("expected kind 'density' or 'pure'");
    Space s = space_from_json(field(j, "labels"));
    Mat m = matrix_from_json(field(j, "matrix"));
    return guarded([&] { return Density(s, m); });
}

Operator operator_from_json(const json& j) {
    if (kind_of(j) != "op") throw InputError("expected kind 'op'");
    Space out = space_from_json(field(j, "labels"));
    Space in = j.contains("in_labels") ? space_from_json(j.at("in_labels")) : out;
    Mat m = matrix_from_json(field(j, "matrix"));
    return guarded([&] { return Operator(in, out, m); });
}

Channel channel_from_json(const json& j) {
    Space in = space_from_json(field(j, "in"));
    Space out = space_from_json(field(j, "out"));
    const auto& ks = field(j, "kraus");
    if (!ks.is_array() || ks.empty()) throw InputError("kraus must be a non-empty array");
    std::vector<Mat> kraus;
    for (const auto& k : ks) kraus.push_back(matrix_from_json(k));
    return guarded([&] { return Channel(in, out, kraus); });
}

json read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "': " + e.what());
    }
}

void write_file(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << j.dump(2) << "\n";
}

}  // namespace qdec::io
