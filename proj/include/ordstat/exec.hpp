#ifndef ORDSTAT_EXEC_HPP
#define ORDSTAT_EXEC_HPP

namespace ordstat {

// Execution policy for the data-parallel kernels (moment quadrature,
// Monte Carlo replications, dominance trials).  Serial is the reference
// implementation; Parallel distributes independent work items over OpenMP
// threads while keeping the reduction order fixed, so both policies produce
// bit-identical results.
enum class Exec { Serial, Parallel };

} // namespace ordstat

#endif
