// field.cpp

#include "chmin/field.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chmin {

GridGeometry build_grid(double length, int n) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("build_grid: length must be positive and finite");
    if (n < 4)
        throw std::invalid_argument("build_grid: need at least 4 cells per side");
    return {length, n, length / n};
}

ScalarField::ScalarField(const GridGeometry& g)
    : geom_(g), v_(std::size_t(g.n + 1) * std::size_t(g.n + 1), 0.0) {}

void ScalarField::zero_boundary() {
    const int n = geom_.n;
    for (int i = 0; i <= n; ++i) {
        (*this)(i, 0) = 0.0;
        (*this)(i, n) = 0.0;
        (*this)(0, i) = 0.0;
        (*this)(n, i) = 0.0;
    }
}

ScalarField sample(const GridGeometry& g,
                   const std::function<double(double, double)>& f) {
    ScalarField u(g);
    const int n = g.n;
    for (int i = 1; i < n; ++i) {
        for (int j = 1; j < n; ++j) {
            const double v = f(i * g.spacing, j * g.spacing);
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "sample: f produced a non-finite value at node (" << i
                    << ", " << j << ")";
                throw std::runtime_error(msg.str());
            }
            u(i, j) = v;
        }
    }
    return u;
}

ScalarField eigenfunction(const GridGeometry& g) {
    const double w = std::numbers::pi / g.length;
    return sample(g, [w](double x, double y) {
        return std::sin(w * x) * std::sin(w * y);
    });
}

ScalarField apply_laplacian(const ScalarField& u) {
    const GridGeometry& g = u.geometry();
    ScalarField out(g);
    const int n = g.n;
    const double ih2 = 1.0 / (g.spacing * g.spacing);
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            out(i, j) = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) -
                         4.0 * u(i, j)) * ih2;
    return out;
}

double inf_norm(const ScalarField& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

double discrete_lambda1(const GridGeometry& g) {
    const double s = std::sin(std::numbers::pi * g.spacing / (2.0 * g.length));
    return 8.0 / (g.spacing * g.spacing) * s * s;
}

double continuum_lambda1(const GridGeometry& g) {
    return 2.0 * std::numbers::pi * std::numbers::pi / (g.length * g.length);
}

void write_field_csv(const ScalarField& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
    const int n = u.n();
    char buf[32];
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", u(i, j));
            out << buf << (i == n ? '\n' : ',');
        }
    }
    if (!out) throw std::runtime_error("write_field_csv: write failed for " + path);
}

ScalarField read_field_csv(const std::string& path, double length) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    const int nodes = int(rows.size());
    if (nodes < 5) throw std::runtime_error("read_field_csv: too few rows in " + path);
    for (const auto& r : rows)
        if (int(r.size()) != nodes)
            throw std::runtime_error("read_field_csv: ragged matrix in " + path);
    ScalarField u(build_grid(length, nodes - 1));
    for (int j = 0; j < nodes; ++j)
        for (int i = 0; i < nodes; ++i) u(i, j) = rows[j][i];
    u.zero_boundary();
    return u;
}

void write_field_pgm16(const ScalarField& u, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field_pgm16: cannot open " + path);
    const int n = u.n();
    out << "P5\n" << (n + 1) << " " << (n + 1) << "\n65535\n";
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double t = (u(i, j) + 1.0) * 0.5;
            t = std::min(1.0, std::max(0.0, t));
            const auto s = std::uint16_t(std::lround(t * 65535.0));
            // PGM stores the most significant byte first
            const char bytes[2] = {char(s >> 8), char(s & 0xff)};
            out.write(bytes, 2);
        }
    }
    if (!out) throw std::runtime_error("write_field_pgm16: write failed for " + path);
}

void write_field_sidecar(const std::string& path, const GridGeometry& g,
                         double theta, double kappa, double t_final) {
    nlohmann::json j;
    j["L"] = g.length;
    j["N"] = g.n;
    j["theta"] = theta;
    j["kappa"] = kappa;
    j["t_final"] = t_final;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_sidecar: cannot open " + path);
    out << j.dump(2) << "\n";
}

} // namespace chmin
