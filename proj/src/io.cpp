#include "rotostar/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "rotostar/errors.hpp"

namespace rotostar {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw CorruptTable("bad number '" + s + "' in " + where);
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("IoFailure", "cannot write " + path);
    return os;
}

const char* kFieldNames[] = {"rho", "P", "Upsilon", "Phi", "A", "N2"};

const Mat& field(const FieldTables& t, int k) {
    switch (k) {
        case 0: return t.rho;
        case 1: return t.P;
        case 2: return t.Upsilon;
        case 3: return t.Phi;
        case 4: return t.A;
        default: return t.N2;
    }
}
Mat& field(FieldTables& t, int k) { return const_cast<Mat&>(field(static_cast<const FieldTables&>(t), k)); }

}  // namespace

int CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::string& meta) {
    std::ofstream os = open_out(path);
    if (!meta.empty()) os << "# " << meta << '\n';
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt17(row[c]);
        os << '\n';
    }
    if (!os) throw IoError("IoFailure", "write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("IoFailure", "cannot read " + path);
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!have_header && t.meta.empty()) t.meta = line.size() > 2 ? line.substr(2) : "";
            continue;
        }
        if (!have_header) {
            t.header = split(line, ',');
            have_header = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != t.header.size())
            throw CorruptTable(path + ": row " + std::to_string(t.rows.size() + 1) + " has " +
                               std::to_string(cells.size()) + " columns, expected " +
                               std::to_string(t.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c, path));
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw CorruptTable(path + ": missing column header");
    return t;
}

void save_model(const StellarModel& m, const std::string& dir) {
    fs::create_directories(dir);
    const FieldTables& t = m.tables;
    json meta;
    meta["format_version"] = kModelFormatVersion;
    meta["kind"] = m.spherical ? "spherical" : "rotating";
    meta["eos"] = {{"gamma", m.eos.gamma}, {"A", m.eos.A}, {"C_V", m.eos.C_V}, {"sigma", m.eos.sigma}};
    meta["rho_O"] = m.rho_O;
    meta["G"] = m.G;
    meta["discriminant"] = m.discriminant == DiscriminantForm::Entropy ? "entropy" : "literal";
    meta["le_tol"] = m.le_tol;
    meta["rotation"] = {{"Omega", m.rotation.Omega},
                        {"omega_coeffs", m.rotation.omega_coeffs},
                        {"omega_cutoff", m.rotation.omega_cutoff}};
    const DistortedOptions& o = m.build_opts;
    meta["distorted"] = {{"n_xi", o.n_xi},   {"n_zeta", o.n_zeta},     {"panel_order", o.panel_order},
                         {"tol", o.tol},     {"max_iter", o.max_iter}, {"relaxation", o.relaxation},
                         {"fine_points", o.fine_points}};
    meta["n_r"] = t.r.size();
    meta["n_zeta"] = t.zeta.size();
    std::vector<std::vector<double>> rows;
    rows.reserve(t.r.size() * t.zeta.size());
    for (std::size_t i = 0; i < t.r.size(); ++i)
        for (std::size_t j = 0; j < t.zeta.size(); ++j) {
            std::vector<double> row{t.r[i], t.zeta[j]};
            for (int k = 0; k < 6; ++k) row.push_back(field(t, k)(i, j));
            rows.push_back(std::move(row));
        }
    std::vector<std::string> header{"r", "zeta"};
    for (const char* n : kFieldNames) header.emplace_back(n);
    // Full precision doubles in the metadata as well, so rebuilt scales match bit for bit.
    write_csv((fs::path(dir) / "model.csv").string(), header, rows, meta.dump(-1, ' ', false));
}

StellarModel load_model(const std::string& dir) {
    const std::string path = (fs::path(dir) / "model.csv").string();
    if (!fs::exists(path)) throw IoError("IoFailure", "no model.csv in " + dir);
    const CsvTable tab = read_csv(path);
    json meta;
    try {
        meta = json::parse(tab.meta);
    } catch (const json::exception& e) {
        throw CorruptTable(path + ": metadata line is not valid JSON");
    }
    const int version = meta.value("format_version", 0);
    if (version != kModelFormatVersion)
        throw VersionMismatch(path + ": format_version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kModelFormatVersion) + "); re-run the equilibrium task to regenerate it");
    std::size_t nr = 0, nz = 0;
    try {
        nr = meta.at("n_r").get<std::size_t>();
        nz = meta.at("n_zeta").get<std::size_t>();
    } catch (const json::exception&) {
        throw CorruptTable(path + ": metadata lacks table dimensions");
    }
    if (tab.header.size() != 8) throw CorruptTable(path + ": expected 8 columns");
    if (tab.rows.size() != nr * nz)
        throw CorruptTable(path + ": " + std::to_string(tab.rows.size()) + " rows, expected " +
                           std::to_string(nr * nz));

    std::vector<double> r(nr), zeta(nz);
    for (std::size_t i = 0; i < nr; ++i) r[i] = tab.rows[i * nz][0];
    for (std::size_t j = 0; j < nz; ++j) zeta[j] = tab.rows[j][1];

    try {
        const auto& e = meta.at("eos");
        EquationOfState eos;
        eos.gamma = e.at("gamma").get<double>();
        eos.A = e.at("A").get<double>();
        eos.C_V = e.at("C_V").get<double>();
        eos.sigma = e.at("sigma").get<std::vector<double>>();
        const double rho_O = meta.at("rho_O").get<double>(), G = meta.at("G").get<double>();
        StellarModel m;
        if (meta.at("kind").get<std::string>() == "spherical") {
            m = build_spherical_model(eos, rho_O, G, r, meta.at("le_tol").get<double>());
        } else {
            RotationProfile rp;
            const auto& jr = meta.at("rotation");
            rp.Omega = jr.at("Omega").get<double>();
            rp.omega_coeffs = jr.at("omega_coeffs").get<std::vector<double>>();
            rp.omega_cutoff = jr.at("omega_cutoff").get<double>();
            const auto& jd = meta.at("distorted");
            DistortedOptions o;
            o.n_xi = jd.at("n_xi");
            o.n_zeta = jd.at("n_zeta");
            o.panel_order = jd.at("panel_order");
            o.tol = jd.at("tol");
            o.max_iter = jd.at("max_iter");
            o.relaxation = jd.at("relaxation");
            o.fine_points = jd.at("fine_points");
            m = build_rotating_model(eos, rho_O, G, rp, o, r, zeta);
        }
        if (meta.value("discriminant", "entropy") == "literal") m.discriminant = DiscriminantForm::Literal;
        // Restore the stored tables; a rebuilt value far from the stored one means the file was edited.
        FieldTables& t = m.tables;
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nz; ++j) {
                const auto& row = tab.rows[i * nz + j];
                if (row[0] != r[i] || row[1] != zeta[j]) throw CorruptTable(path + ": rows are not a product grid");
                for (int k = 0; k < 6; ++k) {
                    const double stored = row[2 + k], rebuilt = field(t, k)(i, j);
                    if (std::abs(stored - rebuilt) > 1e-9 * std::max(1.0, std::abs(rebuilt)))
                        throw CorruptTable(path + ": field " + kFieldNames[k] +
                                           " does not match the stored parameters");
                    field(t, k)(i, j) = stored;
                }
            }
        return m;
    } catch (const json::exception& e) {
        throw CorruptTable(path + ": metadata incomplete (" + std::string(e.what()) + ")");
    }
}

double max_field_discrepancy(const StellarModel& a, const StellarModel& b) {
    const FieldTables &s = a.tables, &t = b.tables;
    if (s.r != t.r || s.zeta != t.zeta) return INFINITY;
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) worst = std::max(worst, (field(s, k) - field(t, k)).cwiseAbs().maxCoeff());
    return worst;
}

std::string sha256_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("IoFailure", "cannot read " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 15];
    while (is) {
        is.read(buf, sizeof buf);
        if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char h[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(h, sizeof h, "%02x", md[i]);
        hex += h;
    }
    return hex;
}

std::vector<ManifestEntry> write_manifest(const std::string& dir) {
    std::vector<ManifestEntry> entries;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string rel = fs::relative(e.path(), dir).generic_string();
        if (rel == "manifest.json") continue;
        entries.push_back({rel, sha256_file(e.path().string()), e.file_size()});
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    json j;
    j["format_version"] = kModelFormatVersion;
    j["files"] = json::array();
    for (const auto& e : entries) j["files"].push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    std::ofstream os = open_out((fs::path(dir) / "manifest.json").string());
    os << j.dump(2) << '\n';
    return entries;
}

std::vector<ManifestEntry> read_manifest(const std::string& dir) {
    const std::string path = (fs::path(dir) / "manifest.json").string();
    std::ifstream is(path);
    if (!is) throw IoError("IoFailure", "cannot read " + path);
    std::vector<ManifestEntry> out;
    try {
        const json j = json::parse(is);
        for (const auto& f : j.at("files"))
            out.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(),
                           f.at("bytes").get<std::uintmax_t>()});
    } catch (const json::exception& e) {
        throw CorruptTable(path + ": " + e.what());
    }
    return out;
}

void write_svg_plot(const std::string& path, const std::string& title, const std::vector<double>& x,
                    const std::vector<std::vector<double>>& ys, const std::vector<std::string>& labels,
                    bool scatter) {
    const double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (double v : x)
        if (std::isfinite(v)) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (const auto& y : ys)
        for (double v : y)
            if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
    if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
    if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double v) { return H - bottom - (v - y0) / (y1 - y0) * (H - top - bottom); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ofstream os = open_out(path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
       << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left << "\" y=\"" << H - 28 << "\" font-size=\"11\">" << fmt17(x0).substr(0, 10)
       << "</text><text x=\"" << W - right << "\" y=\"" << H - 28 << "\" font-size=\"11\" text-anchor=\"end\">"
       << fmt17(x1).substr(0, 10) << "</text>\n";
    os << "<text x=\"" << left - 4 << "\" y=\"" << H - bottom << "\" font-size=\"11\" text-anchor=\"end\">"
       << fmt17(y0).substr(0, 10) << "</text><text x=\"" << left - 4 << "\" y=\"" << top + 10
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt17(y1).substr(0, 10) << "</text>\n";
    for (std::size_t c = 0; c < ys.size(); ++c) {
        const char* col = colors[c % 5];
        if (scatter) {
            for (std::size_t i = 0; i < x.size() && i < ys[c].size(); ++i)
                if (std::isfinite(x[i]) && std::isfinite(ys[c][i]))
                    os << "<circle cx=\"" << px(x[i]) << "\" cy=\"" << py(ys[c][i]) << "\" r=\"2\" fill=\"" << col
                       << "\"/>\n";
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
            for (std::size_t i = 0; i < x.size() && i < ys[c].size(); ++i)
                if (std::isfinite(x[i]) && std::isfinite(ys[c][i])) os << px(x[i]) << ',' << py(ys[c][i]) << ' ';
            os << "\"/>\n";
        }
        if (c < labels.size())
            os << "<text x=\"" << W - right - 4 << "\" y=\"" << top + 16 + 14 * c
               << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << col << "\">" << labels[c] << "</text>\n";
    }
    os << "</svg>\n";
}

ReportOutput emit_report(const std::string& dir, bool svg) {
    ReportOutput out;
    const fs::path summary = fs::path(dir) / "summary.json";
    json j = json::object();
    if (fs::exists(summary)) {
        std::ifstream is(summary);
        try {
            j = json::parse(is);
        } catch (const json::exception& e) {
            throw CorruptTable(summary.string() + ": " + e.what());
        }
    }
    if (j.contains("checks")) {
        for (const auto& c : j["checks"]) {
            std::ostringstream line;
            line << (c.value("pass", false) ? "PASS " : "FAIL ") << c.value("task", std::string()) << ": "
                 << c.value("name", std::string());
            if (c.contains("value") && c["value"].is_number()) line << " = " << c["value"].get<double>();
            if (c.contains("note")) line << " (" << c["note"].get<std::string>() << ")";
            out.lines.push_back(line.str());
        }
    }
    if (j.contains("series") && svg) {
        for (const auto& s : j["series"]) {
            const std::string file = s.at("file").get<std::string>();
            const fs::path csv = fs::path(dir) / file;
            if (!fs::exists(csv)) continue;
            const CsvTable t = read_csv(csv.string());
            const int xc = t.column(s.at("x").get<std::string>());
            if (xc < 0) continue;
            std::vector<double> x;
            for (const auto& r : t.rows) x.push_back(r[xc]);
            std::vector<std::vector<double>> ys;
            std::vector<std::string> labels;
            for (const auto& yn : s.at("y")) {
                const int yc = t.column(yn.get<std::string>());
                if (yc < 0) continue;
                std::vector<double> y;
                for (const auto& r : t.rows) y.push_back(r[yc]);
                ys.push_back(std::move(y));
                labels.push_back(yn.get<std::string>());
            }
            const std::string name = fs::path(file).stem().string() + ".svg";
            write_svg_plot((fs::path(dir) / name).string(), s.value("title", file), x, ys, labels,
                           s.value("scatter", false));
            out.files.push_back(name);
        }
    }
    std::ofstream os = open_out((fs::path(dir) / "report.txt").string());
    for (const auto& l : out.lines) os << l << '\n';
    out.files.push_back("report.txt");
    return out;
}

}  // namespace rotostar
