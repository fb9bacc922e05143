#include "curvop/io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace curvop {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", x);
    return buf;
}

std::string gridfield_to_csv(const GridField& gf) {
    std::ostringstream out;
    out << "u,v," << gf.name << "\n";
    for (int iu = 0; iu < gf.nu; ++iu)
        for (int iv = 0; iv < gf.nv; ++iv)
            out << fmt_double(gf.us[iu]) << "," << fmt_double(gf.vs[iv]) << ","
                << fmt_double(gf.at(iu, iv)) << "\n";
    return out.str();
}

std::string gridfields_to_csv(const std::vector<GridField>& fields) {
    std::ostringstream out;
    out << "u,v";
    for (const auto& f : fields) out << "," << f.name;
    out << "\n";
    const GridField& g0 = fields.front();
    for (int iu = 0; iu < g0.nu; ++iu)
        for (int iv = 0; iv < g0.nv; ++iv) {
            out << fmt_double(g0.us[iu]) << "," << fmt_double(g0.vs[iv]);
            for (const auto& f : fields) out << "," << fmt_double(f.at(iu, iv));
            out << "\n";
        }
    return out.str();
}

std::string gridfields_to_json(const std::vector<GridField>& fields) {
    using json = nlohmann::ordered_json;
    const GridField& g0 = fields.front();
    json j;
    j["nu"] = g0.nu;
    j["nv"] = g0.nv;
    json us = json::array(), vs = json::array();
    for (double x : g0.us) us.push_back(fmt_double(x));
    for (double x : g0.vs) vs.push_back(fmt_double(x));
    j["u"] = us;
    j["v"] = vs;
    j["order"] = "row-major (u outer, v inner)";
    json vals;
    for (const auto& f : fields) {
        json arr = json::array();
        for (double x : f.values) arr.push_back(fmt_double(x));
        vals[f.name] = arr;
    }
    j["fields"] = vals;
    return j.dump(2) + "\n";
}

std::string opgrid_to_json(const OpGrid& grid, const std::string& operator_name) {
    using json = nlohmann::ordered_json;
    json j;
    j["operator"] = operator_name;
    j["value_kind"] = value_kind_name(grid.kind);
    j["nu"] = grid.nu;
    j["nv"] = grid.nv;
    json us = json::array(), vs = json::array();
    for (double x : grid.us) us.push_back(fmt_double(x));
    for (double x : grid.vs) vs.push_back(fmt_double(x));
    j["u"] = us;
    j["v"] = vs;
    json terms = json::array();
    for (const auto& t : grid.terms) {
        json tj;
        tj["dmu"] = t.idx.first;
        tj["dnu"] = t.idx.second;
        tj["provenance"] = t.provenance;
        json field;
        for (size_t c = 0; c < t.channel_names.size(); ++c) {
            json arr = json::array();
            for (double x : t.channels[c]) arr.push_back(fmt_double(x));
            field[t.channel_names[c]] = arr;
        }
        tj["field"] = field;
        terms.push_back(tj);
    }
    j["terms"] = terms;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << content;
}

}  // namespace curvop
