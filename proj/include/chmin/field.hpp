// field.hpp
// Square-grid geometry, node fields with homogeneous Dirichlet boundary,
// and the five-point Laplacian.

#ifndef CHMIN_FIELD_HPP
#define CHMIN_FIELD_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace chmin {

// Domain (0,L)^2 with L = sqrt(2)*pi has first Dirichlet eigenvalue 1.
inline const double kDefaultLength = 4.442882938158366;

struct GridGeometry {
    double length;  // L
    int n;          // cells per side; (n+1)^2 nodes
    double spacing; // h = L/n
};

GridGeometry build_grid(double length, int n);

// Node values u(i,j), i = x index, j = y index, stored row-major by i.
// Boundary nodes (i or j in {0,n}) are held at exactly 0.
class ScalarField {
public:
    explicit ScalarField(const GridGeometry& g);

    const GridGeometry& geometry() const { return geom_; }
    int n() const { return geom_.n; }

    double operator()(int i, int j) const { return v_[i * (geom_.n + 1) + j]; }
    double& operator()(int i, int j) { return v_[i * (geom_.n + 1) + j]; }

    std::span<const double> values() const { return v_; }
    std::span<double> values() { return v_; }

    void zero_boundary();

private:
    GridGeometry geom_;
    std::vector<double> v_;
};

// values[i][j] = f(i h, j h); the boundary is forced to zero.
ScalarField sample(const GridGeometry& g,
                   const std::function<double(double, double)>& f);

// First Dirichlet eigenfunction sin(pi x/L) sin(pi y/L) on the nodes.
ScalarField eigenfunction(const GridGeometry& g);

// Five-point Laplacian on interior nodes; output boundary is zero.
ScalarField apply_laplacian(const ScalarField& u);

double inf_norm(const ScalarField& u);

// Smallest eigenvalue of the negative five-point Laplacian with Dirichlet
// nodes: (8/h^2) sin^2(pi h/(2L)).
double discrete_lambda1(const GridGeometry& g);

// Continuum counterpart 2 pi^2 / L^2.
double continuum_lambda1(const GridGeometry& g);

// CSV matrix of node values, one row per j, columns i = 0..n.
void write_field_csv(const ScalarField& u, const std::string& path);

// Reads a field written by write_field_csv; needs L to rebuild the geometry.
ScalarField read_field_csv(const std::string& path, double length);

// 16-bit binary PGM (P5), u mapped affinely from [-1,1] to [0,65535],
// one scanline per j.
void write_field_pgm16(const ScalarField& u, const std::string& path);

// JSON sidecar with the grid and run parameters of an image/CSV dump.
void write_field_sidecar(const std::string& path, const GridGeometry& g,
                         double theta, double kappa, double t_final);

} // namespace chmin

#endif
