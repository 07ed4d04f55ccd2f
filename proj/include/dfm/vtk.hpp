// Legacy ASCII VTK export of a discrete solution: the matrix cells plus the
// fracture faces as one unstructured grid, with cell data for the pressure,
// a block id (0 = matrix, 1 + fracture index for interface faces) and the
// pointwise jump magnitude on the fracture faces.

#ifndef DFM_VTK_HPP
#define DFM_VTK_HPP

#include <dfm/scheme.hpp>

#include <iosfwd>
#include <string>

namespace dfm
{

void write_vtk(const Scheme& s, const Eigen::VectorXd& u, std::ostream& out);

/// Convenience wrapper opening the file, throws std::runtime_error on I/O
/// failure.
void write_vtk_file(const Scheme& s, const Eigen::VectorXd& u, const std::string& path);

} // namespace dfm

#endif
