# Earliest 1-hour meeting between 9AM and 5PM; 9AM-10AM is not available.
import json

WORK_START, WORK_END = 9 * 60, 17 * 60
DURATION = 60
busy = [(9 * 60, 10 * 60)]


def fmt(minutes):
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def earliest_slot():
    start = WORK_START
    while start + DURATION <= WORK_END:
        end = start + DURATION
        if all(end <= b_start or start >= b_end for b_start, b_end in busy):
            return start, end
        start += 15
    return None


slot = earliest_slot()
if slot is None:
    print("No feasible time")
else:
    start, end = slot
    print(json.dumps({"start": {"day": "Monday", "time": fmt(start)},
                      "end": {"day": "Monday", "time": fmt(end)}}))
