import logging
from functools import wraps
from time import perf_counter
import os

FORMAT = '%(asctime)s PID={pid} %(levelname)s %(name)s: %(message)s'
logging.basicConfig(level=os.getenv('BPSIM_LOG_LEVEL', 'INFO').upper(),
                    format=FORMAT.format(pid=os.getpid()))
logger = logging.getLogger(__name__)


class timeit:

    def __init__(self, msg, level=logging.INFO):
        self.msg = msg
        self.level = level

    def __call__(self, f):
        @wraps(f)
        def wrapper(*args, **kwargs):
            logger.log(self.level, '%(message)s Start.',
                       {'message': self.msg},
                       )
            start = perf_counter()
            result = f(*args, **kwargs)
            total = perf_counter() - start
            logger.log(self.level, '%(message)s Elapsed: %(elapsed).3fs',
                       {'message': self.msg, 'elapsed': total},
                       )
            return result
        return wrapper
