package shop.parts;

public class Spare {
}
