"""Timed behaviour of the cockpit-door lock mechanism.

Replays three scripts against the discrete-event door automaton: a
successful emergency entry, a lockout where the pilots preempt the keypad,
and the five-minute lockout expiry.
"""

from insiderctl.door import DoorEvent, door_run, format_trace


def show(title, events):
    print(f"== {title} ==")
    print("step\tevent\tmode\tclock\tpin\topen")
    print(format_trace(door_run(events)))


def main():
    show(
        "emergency code, pilots incapacitated",
        [
            DoorEvent("pin_correct"),
            DoorEvent("epsilon", 30),   # buzzer period ends, window opens
            DoorEvent("epsilon", 4),    # still inside the 5 s window
            DoorEvent("epsilon", 1),    # window closes at exactly 35 s
        ],
    )
    show(
        "pilots preempt with the lock switch",
        [
            DoorEvent("pin_correct"),
            DoorEvent("epsilon", 15),
            DoorEvent("lock"),          # keypad disabled for five minutes
            DoorEvent("epsilon", 299),
            DoorEvent("pin_correct"),   # ignored while locked
            DoorEvent("epsilon", 1),    # lockout expires at exactly 300 s
        ],
    )
    show(
        "unlock acts immediately",
        [
            DoorEvent("lock"),
            DoorEvent("epsilon", 42),
            DoorEvent("unlock"),
        ],
    )


if __name__ == "__main__":
    main()
