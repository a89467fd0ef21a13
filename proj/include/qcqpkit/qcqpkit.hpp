#ifndef QCQPKIT_QCQPKIT_HPP_
#define QCQPKIT_QCQPKIT_HPP_

#include "qcqpkit/constraints.hpp"
#include "qcqpkit/extract.hpp"
#include "qcqpkit/instances.hpp"
#include "qcqpkit/io.hpp"
#include "qcqpkit/render.hpp"
#include "qcqpkit/sdp.hpp"
#include "qcqpkit/symmat.hpp"
#include "qcqpkit/table1.hpp"
#include "qcqpkit/verify.hpp"

#endif  // QCQPKIT_QCQPKIT_HPP_
