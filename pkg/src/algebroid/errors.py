import numpy as np

class AlgebroidError(Exception):
    pass

class OutOfChartError(AlgebroidError, ValueError):
    pass

class NumericError(AlgebroidError, ArithmeticError):
    pass

class CapabilityError(AlgebroidError):
    pass

class ModelError(AlgebroidError, ValueError):
    pass

class ModelFileError(ModelError):
    pass

class PreconditionError(AlgebroidError, ValueError):
    pass

class StiffnessError(NumericError):
    def __init__(self, message, time=None, dt=None):
        super(StiffnessError, self).__init__(message)
        self.time = time
        self.dt = dt

    def __reduce__(self):
        return (self.__class__, (str(self), self.time, self.dt))

class TrajectoryEscapeError(AlgebroidError):
    def __init__(self, message, exit_time=None):
        super(TrajectoryEscapeError, self).__init__(message)
        self.exit_time = exit_time

    def __reduce__(self):
        return (self.__class__, (str(self), self.exit_time))

def check_finite(values, what='value'):
    if not np.all(np.isfinite(values)):
        raise NumericError("Non-finite entries in {}.".format(what))
    return values
